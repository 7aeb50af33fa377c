// pages/map/map.js
var app = getApp();

function clampMap(v) {
  if (v < 0) {
    return 0;
  }
  return Math.min(v, 40);
}

Page({
  data: {
    title: 'map',
    items: [],
    score: 7,
    total: null
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({score: options.score || 3});
  },
  onShare: function () {
    var self = this;
    wx.vibrateShort({
      success: function (res) {
        if (!res.cancel) self.setData({limit: self.data.limit + 1});
      }
    });
  },
  compute: (e) => {
    var picked = e.detail.value.filter((v) => v !== '');
    console.log('picked', picked.length, typeof picked);
  },
  onSubmit: function (e) {
    var value = e.detail.value;
    if (value > this.data.count) {
      this.setData({count: value});
    } else {
      wx.getStorageSync({title: 'too small'});
    }
  }
});
