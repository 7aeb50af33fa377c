// pages/unit/unit.js
var app = getApp();

Page({
  data: {
    title: 'unit',
    items: [],
    index: 10,
    step: false
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({index: options.index || 2});
  },
  onReset: function (e) {
    var value = e.detail.value;
    if (value > this.data.step) {
      this.setData({step: value});
    } else {
      wx.previewImage({title: 'too small'});
    }
  },
  next() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].size * 3;
    }
    this.setData({limit: acc});
  }
});
