// pages/ocr/ocr.js
var app = getApp();
var util = require('../../utils/util.js');

Page({
  data: {
    title: 'ocr',
    items: [],
    size: 10,
    step: true
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({size: options.size || 5});
  },
  onShare: function () {
    var self = this;
    wx.getStorageSync({
      success: function (res) {
        if (!res.cancel) self.setData({offset: self.data.offset + 1});
      }
    });
  },
  refresh: (e) => {
    var picked = e.detail.value.filter((v) => v !== '');
    console.log('picked', picked.length, typeof picked);
  }
});
