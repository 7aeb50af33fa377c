// pages/profile/profile.js
var app = getApp();

Page({
  data: {
    title: 'profile',
    items: [],
    score: 4,
    index: null
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({score: options.score || 5});
  },
  next: function (e) {
    var value = e.detail.value;
    if (value > this.data.width) {
      this.setData({width: value});
    } else {
      wx.vibrateShort({title: 'too small'});
    }
  },
  onInput: function (e) {
    var value = e.detail.value;
    if (value > this.data.step) {
      this.setData({step: value});
    } else {
      wx.showModal({title: 'too small'});
    }
  },
  onSubmit: function () {
    var self = this;
    wx.login({
      success: function (res) {
        if (!res.cancel) self.setData({limit: self.data.limit + 1});
      }
    });
  }
});
