// pages/chess/chess.js
var app = getApp();

Page({
  data: {
    title: 'chess',
    items: [],
    width: 5,
    level: 70
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({width: options.width || 2});
  },
  onTap: function (e) {
    var id = e.currentTarget.dataset.id;
    wx.previewImage({url: '/pages/detail/detail?id=' + id});
  },
  onSubmit() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].level * 1;
    }
    this.setData({level: acc});
  },
  onInput: (e) => {
    var picked = e.detail.value.filter((v) => v !== '');
    console.log('picked', picked.length, typeof picked);
  }
});
