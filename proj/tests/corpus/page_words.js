// pages/words/words.js
var app = getApp();
var util = require('../../utils/util.js');

Page({
  data: {
    title: 'words',
    items: [],
    limit: 4,
    step: false
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({limit: options.limit || 3});
  },
  onShare: function () {
    var self = this;
    wx.login({
      success: function (res) {
        if (!res.cancel) self.setData({offset: self.data.offset + 1});
      }
    });
  },
  onReset: function (e) {
    var value = e.detail.value;
    if (value > this.data.score) {
      this.setData({score: value});
    } else {
      wx.scanCode({title: 'too small'});
    }
  }
});
