import init, { Demo } from "./pkg/jacobi_track_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const status = (msg) => { $("status").textContent = msg; };

const OUTSIDE = -2147483648;
const PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

let demo = null;

function timed(label, f) {
  const start = performance.now();
  const out = f();
  status(`${label} in ${(performance.now() - start).toFixed(0)} ms`);
  return out;
}

function drawSlice() {
  if (!demo) return;
  const t = num("t");
  $("t-out").textContent = t;
  const w = demo.width(), h = demo.height();
  const canvas = $("slice"), ctx = canvas.getContext("2d");
  const sx = canvas.width / (w - 1), sy = canvas.height / (h - 1);

  // values as a grey ramp, one pixel per vertex, then scaled up
  const values = demo.values(t);
  let lo = Infinity, hi = -Infinity;
  for (const v of values) { lo = Math.min(lo, v); hi = Math.max(hi, v); }
  const img = new ImageData(w, h);
  for (let j = 0; j < h; j++) {
    for (let i = 0; i < w; i++) {
      const g = Math.round(255 * (values[j * w + i] - lo) / (hi - lo || 1));
      const k = 4 * ((h - 1 - j) * w + i);
      img.data.set([g, g, g, 255], k);
    }
  }
  const tmp = new OffscreenCanvas(w, h);
  tmp.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = true;
  ctx.drawImage(tmp, 0, 0, w, h, -sx / 2, -sy / 2, canvas.width + sx, canvas.height + sy);

  if ($("show-cells").checked) {
    const cells = demo.components(t, num("delta"));
    ctx.globalAlpha = 0.45;
    for (let j = 0; j < h - 1; j++) {
      for (let i = 0; i < w - 1; i++) {
        const d = cells[j * (w - 1) + i];
        if (d === OUTSIDE) continue;
        ctx.fillStyle = d > 0 ? "#d62728" : d < 0 ? "#1f77b4" : "#999";
        ctx.fillRect(i * sx, canvas.height - (j + 1) * sy, sx + 0.5, sy + 0.5);
      }
    }
    ctx.globalAlpha = 1;
  }

  const crits = demo.criticals(t);
  for (let k = 0; k < crits.length; k += 3) {
    const x = crits[k] * sx, y = canvas.height - crits[k + 1] * sy;
    ctx.beginPath();
    ctx.arc(x, y, 4, 0, 2 * Math.PI);
    ctx.fillStyle = ["#000", "#ff0", "#fff"][crits[k + 2]];
    ctx.fill();
    ctx.strokeStyle = "#000";
    ctx.stroke();
  }
}

function parseTracks(flat) {
  const tracks = [];
  for (let k = 0; k < flat.length;) {
    const id = flat[k], n = flat[k + 1];
    const pts = [];
    for (let m = 0; m < n; m++) {
      const o = k + 2 + 3 * m;
      pts.push([flat[o], flat[o + 1], flat[o + 2]]);
    }
    tracks.push({ id, pts });
    k += 2 + 3 * n;
  }
  return tracks;
}

function drawTracks() {
  if (!demo) return;
  const flat = timed("tracks", () => demo.tracks(num("delta"), num("eps-t"), num("eps-s"), num("eps-l")));
  const tracks = parseTracks(flat);
  const [ex, ey] = demo.extent();
  const canvas = $("tracks"), ctx = canvas.getContext("2d");
  ctx.fillStyle = "#fff";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  // oblique projection: time lifts points up and to the right
  const steps = demo.steps();
  const scale = 0.75 * canvas.width / Math.max(ex, ey);
  const lift = (0.22 * canvas.height) / steps;
  const px = ([x, y, t]) => [20 + x * scale + t * lift * 0.6, canvas.height - 20 - y * scale * 0.8 - t * lift];
  tracks.forEach((tr, k) => {
    ctx.strokeStyle = PALETTE[k % PALETTE.length];
    ctx.lineWidth = 2;
    ctx.beginPath();
    tr.pts.forEach((p, m) => {
      const [x, y] = px(p);
      if (m === 0) ctx.moveTo(x, y); else ctx.lineTo(x, y);
    });
    ctx.stroke();
  });
  ctx.fillStyle = "#222";
  ctx.fillText(`${tracks.length} tracks, δ = ${num("delta")}`, 10, 16);
}

function generate() {
  const size = num("size");
  demo?.free();
  demo = timed("generated", () => new Demo(size, size, num("steps"), num("noise"), num("seed")));
  $("t").max = demo.steps() - 1;
  $("t").value = 0;
  drawSlice();
}

await init();
$("generate").onclick = generate;
$("t").oninput = drawSlice;
$("delta").onchange = drawSlice;
$("show-cells").onchange = drawSlice;
$("suggest").onclick = () => {
  const d = demo.suggest_delta();
  if (Number.isNaN(d)) { status("no robustness gap found"); return; }
  $("delta").value = d.toFixed(4);
  drawSlice();
};
$("track").onclick = drawTracks;
generate();
