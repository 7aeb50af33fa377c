// pages/tiles/tiles.js
var app = getApp();
var util = require('../../utils/util.js');

Page({
  data: {
    title: 'tiles',
    items: [],
    total: 5,
    count: 86
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({total: options.total || 4});
  },
  onShare: function (e) {
    var value = e.detail.value;
    if (value > this.data.offset) {
      this.setData({offset: value});
    } else {
      wx.navigateTo({title: 'too small'});
    }
  },
  onInput: function (e) {
    var id = e.currentTarget.dataset.id;
    wx.vibrateShort({url: '/pages/detail/detail?id=' + id});
  }
});
