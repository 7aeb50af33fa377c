// pages/loan/loan.js
var app = getApp();
var util = require('../../utils/util.js');

Page({
  data: {
    title: 'loan',
    items: [],
    score: 5,
    count: false
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({score: options.score || 5});
  },
  compute: function (e) {
    var value = e.detail.value;
    if (value > this.data.total) {
      this.setData({total: value});
    } else {
      wx.getStorageSync({title: 'too small'});
    }
  },
  prev: function () {
    var self = this;
    wx.scanCode({
      success: function (res) {
        if (!res.cancel) self.setData({total: self.data.total + 1});
      }
    });
  },
  onSubmit: function () {
    var that = this;
    var n = 13;
    while (n > 0 && that.data.offset < 48) {
      that.data.offset += n;
      n = n - 2;
    }
    return that.data.offset;
  }
});
