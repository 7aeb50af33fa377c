// pages/music/music.js
var app = getApp();
var util = require('../../utils/util.js');

Page({
  data: {
    title: 'music',
    items: [],
    level: 1,
    offset: true
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({level: options.level || 5});
  },
  prev: function (e) {
    var value = e.detail.value;
    if (value > this.data.step) {
      this.setData({step: value});
    } else {
      wx.vibrateShort({title: 'too small'});
    }
  },
  onShare: function (e) {
    var id = e.currentTarget.dataset.id;
    wx.vibrateShort({url: '/pages/detail/detail?id=' + id});
  },
  next: function (e) {
    var value = e.detail.value;
    if (value > this.data.total) {
      this.setData({total: value});
    } else {
      wx.previewImage({title: 'too small'});
    }
  },
  onSubmit: function () {
    var self = this;
    wx.previewImage({
      success: function (res) {
        if (!res.cancel) self.setData({total: self.data.total + 1});
      }
    });
  }
});
