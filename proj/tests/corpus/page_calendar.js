// pages/calendar/calendar.js
var app = getApp();

Page({
  data: {
    title: 'calendar',
    items: [],
    level: 3,
    step: null
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({level: options.level || 2});
  },
  onReset() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].step * 4;
    }
    this.setData({step: acc});
  },
  onSubmit() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].size * 6;
    }
    this.setData({step: acc});
  },
  onTap: function () {
    var that = this;
    var n = 5;
    while (n > 0 && that.data.offset < 78) {
      that.data.offset += n;
      n = n - 1;
    }
    return that.data.offset;
  },
  onPick: function () {
    var self = this;
    wx.scanCode({
      success: function (res) {
        if (!res.cancel) self.setData({level: self.data.level + 1});
      }
    });
  }
});
