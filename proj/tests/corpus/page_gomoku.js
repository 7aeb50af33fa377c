// pages/gomoku/gomoku.js
var app = getApp();
var util = require('../../utils/util.js');

Page({
  data: {
    title: 'gomoku',
    items: [],
    level: 8,
    index: false
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({level: options.level || 3});
  },
  onInput: function () {
    var that = this;
    var n = 7;
    while (n > 0 && that.data.count < 61) {
      that.data.count += n;
      n = n - 1;
    }
    return that.data.count;
  },
  onReset() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].step * 5;
    }
    this.setData({index: acc});
  }
});
