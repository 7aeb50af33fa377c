function save(key, value) {
  try_set(key, JSON.stringify(value));
}

function try_set(key, raw) {
  wx.setStorageSync(key, raw);
}

function load(key, fallback) {
  var raw = wx.getStorageSync(key);
  if (!raw) {
    return fallback;
  }
  return JSON.parse(raw);
}

function clearAll() {
  var keys = wx.getStorageInfoSync().keys;
  for (var i = 0; i < keys.length; i = i + 1) {
    wx.removeStorageSync(keys[i]);
  }
}
