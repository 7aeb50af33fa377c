// Promise wrapper around wx.request with a retry budget.
function request(options, retries) {
  if (retries === undefined) {
    retries = 2;
  }
  return new Promise(function (resolve, reject) {
    wx.request({
      url: options.url,
      data: options.data || {},
      method: options.method || 'GET',
      success: (res) => resolve(res.data),
      fail: function (err) {
        if (retries > 0) {
          request(options, retries - 1).then(resolve, reject);
        } else {
          reject(err);
        }
      }
    });
  });
}

module.exports = request;
