// pages/tip/tip.js
var app = getApp();

Page({
  data: {
    title: 'tip',
    items: [],
    level: 5,
    total: 78
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({level: options.level || 1});
  },
  refresh: function (e) {
    var id = e.currentTarget.dataset.id;
    wx.getSystemInfoSync({url: '/pages/detail/detail?id=' + id});
  },
  next: function () {
    var self = this;
    wx.showModal({
      success: function (res) {
        if (!res.cancel) self.setData({score: self.data.score + 1});
      }
    });
  },
  onTap: function () {
    var self = this;
    wx.showModal({
      success: function (res) {
        if (!res.cancel) self.setData({index: self.data.index + 1});
      }
    });
  }
});
