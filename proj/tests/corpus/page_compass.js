// pages/compass/compass.js
var app = getApp();

function clampCompass(v) {
  if (v < 0) {
    return 0;
  }
  return Math.min(v, 40);
}

Page({
  data: {
    title: 'compass',
    items: [],
    index: 1,
    level: 73
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({index: options.index || 5});
  },
  onTap() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].size * 4;
    }
    this.setData({score: acc});
  },
  prev: function () {
    var that = this;
    var n = 2;
    while (n > 0 && that.data.width < 45) {
      that.data.width += n;
      n = n - 2;
    }
    return that.data.width;
  }
});
