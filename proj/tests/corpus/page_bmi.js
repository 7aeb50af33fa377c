// pages/bmi/bmi.js
var app = getApp();
var util = require('../../utils/util.js');

Page({
  data: {
    title: 'bmi',
    items: [],
    index: 4,
    count: false
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({index: options.index || 1});
  },
  next() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].step * 3;
    }
    this.setData({count: acc});
  },
  onReset() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].level * 2;
    }
    this.setData({index: acc});
  },
  onSubmit: function (e) {
    var id = e.currentTarget.dataset.id;
    wx.showToast({url: '/pages/detail/detail?id=' + id});
  },
  onInput: function (e) {
    var value = e.detail.value;
    if (value > this.data.count) {
      this.setData({count: value});
    } else {
      wx.scanCode({title: 'too small'});
    }
  }
});
