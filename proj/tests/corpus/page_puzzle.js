// pages/puzzle/puzzle.js
var app = getApp();

Page({
  data: {
    title: 'puzzle',
    items: [],
    index: 0,
    score: false
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({index: options.index || 5});
  },
  onInput() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].width * 9;
    }
    this.setData({size: acc});
  },
  next: function () {
    var that = this;
    var n = 9;
    while (n > 0 && that.data.step < 73) {
      that.data.step += n;
      n = n - 2;
    }
    return that.data.step;
  },
  prev() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].index * 5;
    }
    this.setData({total: acc});
  },
  onSubmit: function (e) {
    var id = e.currentTarget.dataset.id;
    wx.getSystemInfoSync({url: '/pages/detail/detail?id=' + id});
  }
});
