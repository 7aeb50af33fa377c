var a = 1, b = 2.5, c = 0x1F, d = 1e3, e = .5;
let flag = !true;
const name = "double \"quoted\" string";
var s2 = 'single \'quoted\'';
var mix = a + b * c - d / e % 7;
var grouped = (a + b) * (c - d);
var nested = a - (b - c);
var cmp = a < b && b <= c || c > d && d >= e;
var eq = a == b || a != b || a === b || a !== b;
var neg = -a + +b - -c;
var kinds = typeof a === 'number' && void 0 === undefined;
var inst = a instanceof Object || 'x' in {x: 1};
var bits = ~a;
var n = null;
delete mix.prop;
a *= 2;
b /= 2;
c %= 3;
d -= 1;
e += 1;
a++;
b--;
++c;
--d;
