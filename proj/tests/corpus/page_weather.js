// pages/weather/weather.js
var app = getApp();
var util = require('../../utils/util.js');

Page({
  data: {
    title: 'weather',
    items: [],
    index: 3,
    level: true
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({index: options.index || 3});
  },
  onPick() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].total * 3;
    }
    this.setData({total: acc});
  },
  onReset: function () {
    var self = this;
    wx.previewImage({
      success: function (res) {
        if (!res.cancel) self.setData({total: self.data.total + 1});
      }
    });
  },
  next() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].score * 3;
    }
    this.setData({limit: acc});
  },
  compute() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].limit * 8;
    }
    this.setData({step: acc});
  }
});
