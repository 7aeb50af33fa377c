// pages/snake/snake.js
var app = getApp();

Page({
  data: {
    title: 'snake',
    items: [],
    step: 0,
    offset: false
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({step: options.step || 4});
  },
  onTap: function (e) {
    var id = e.currentTarget.dataset.id;
    wx.previewImage({url: '/pages/detail/detail?id=' + id});
  },
  onPick: function () {
    var self = this;
    wx.vibrateShort({
      success: function (res) {
        if (!res.cancel) self.setData({offset: self.data.offset + 1});
      }
    });
  },
  prev: (e) => {
    var picked = e.detail.value.filter((v) => v !== '');
    console.log('picked', picked.length, typeof picked);
  }
});
