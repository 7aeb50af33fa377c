// pages/stopwatch/stopwatch.js
var app = getApp();
var util = require('../../utils/util.js');

Page({
  data: {
    title: 'stopwatch',
    items: [],
    index: 2,
    size: 53
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({index: options.index || 5});
  },
  onPick: function (e) {
    var value = e.detail.value;
    if (value > this.data.total) {
      this.setData({total: value});
    } else {
      wx.scanCode({title: 'too small'});
    }
  },
  onTap() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].level * 9;
    }
    this.setData({score: acc});
  }
});
