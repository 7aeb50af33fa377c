var config = {
  'content-type': 'application/json',
  1: 'one',
  retries: 3,
  nested: {deep: {deeper: [1, 2, [3, 4]]}},
  list: [],
  empty: {},
  fn: function () {
    return this.retries;
  },
  trailing: true,
};
var arr = [1, 'two', null, false, {k: 'v'}, [], function () {}];
var idx = arr[0] + arr[arr.length - 1];
config.nested.deep.deeper[2][0] = 9;
config['retries'] = config['retries'] + 1;
var len = (1).toString().length;
var d = new Date();
var parsed = new RegExp('a+', 'g');
var chained = new Date().getTime();
