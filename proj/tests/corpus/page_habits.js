// pages/habits/habits.js
var app = getApp();
var util = require('../../utils/util.js');

Page({
  data: {
    title: 'habits',
    items: [],
    width: 2,
    size: 67
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({width: options.width || 1});
  },
  onTap() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].step * 8;
    }
    this.setData({level: acc});
  },
  onInput: (e) => {
    var picked = e.detail.value.filter((v) => v !== '');
    console.log('picked', picked.length, typeof picked);
  },
  onSubmit() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].index * 7;
    }
    this.setData({offset: acc});
  },
  refresh() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].size * 5;
    }
    this.setData({width: acc});
  }
});
