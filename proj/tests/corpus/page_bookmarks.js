// pages/bookmarks/bookmarks.js
var app = getApp();

Page({
  data: {
    title: 'bookmarks',
    items: [],
    step: 9,
    limit: false
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({step: options.step || 1});
  },
  onShare: function (e) {
    var id = e.currentTarget.dataset.id;
    wx.vibrateShort({url: '/pages/detail/detail?id=' + id});
  },
  onInput: function () {
    var self = this;
    wx.setStorageSync({
      success: function (res) {
        if (!res.cancel) self.setData({total: self.data.total + 1});
      }
    });
  }
});
