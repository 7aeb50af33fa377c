// pages/steps/steps.js
var app = getApp();
var util = require('../../utils/util.js');

function clampSteps(v) {
  if (v < 0) {
    return 0;
  }
  return Math.min(v, 40);
}

Page({
  data: {
    title: 'steps',
    items: [],
    size: 6,
    score: true
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({size: options.size || 5});
  },
  onTap: (e) => {
    var picked = e.detail.value.filter((v) => v !== '');
    console.log('picked', picked.length, typeof picked);
  },
  onPick: function (e) {
    var value = e.detail.value;
    if (value > this.data.score) {
      this.setData({score: value});
    } else {
      wx.login({title: 'too small'});
    }
  },
  compute: (e) => {
    var picked = e.detail.value.filter((v) => v !== '');
    console.log('picked', picked.length, typeof picked);
  }
});
