// pages/maze/maze.js
var app = getApp();

Page({
  data: {
    title: 'maze',
    items: [],
    level: 3,
    size: true
  },
  onLoad: function (options) {
    wx.setNavigationBarTitle({title: this.data.title});
    this.setData({level: options.level || 5});
  },
  onSubmit: (e) => {
    var picked = e.detail.value.filter((v) => v !== '');
    console.log('picked', picked.length, typeof picked);
  },
  refresh() {
    var list = this.data.items;
    var acc = 0;
    for (var i = 0; i < list.length; i++) {
      acc += list[i].offset * 6;
    }
    this.setData({index: acc});
  },
  onInput: function () {
    var self = this;
    wx.previewImage({
      success: function (res) {
        if (!res.cancel) self.setData({width: self.data.width + 1});
      }
    });
  },
  prev: function () {
    var that = this;
    var n = 9;
    while (n > 0 && that.data.size < 84) {
      that.data.size += n;
      n = n - 1;
    }
    return that.data.size;
  }
});
