function grade(score) {
  if (score >= 90) {
    return 'A';
  } else if (score >= 80) {
    return 'B';
  } else if (score >= 70) {
    return 'C';
  } else {
    return 'F';
  }
}

function clamp(v, lo, hi) {
  if (v < lo)
    return lo;
  else if (v > hi)
    return hi;
  return v;
}

function sign(x) {
  if (x > 0) return 1;
  if (x < 0) return -1;
  return 0;
}

function empty() {
}

function blocks() {
  {
    var inner = 1;
  }
  {}
  return inner;
}
