// Expects the wasm-bindgen output in ./pkg (see the README).
import init, { lclt_curve, ml_shape, ray_errors } from "./pkg/polybern_demo.js";

const $ = (id) => document.getElementById(id);

// Draws each series as a polyline; series = [{xs, ys, color, dots}].
function plot(canvas, series, { logY = false } = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 30;
  ctx.clearRect(0, 0, w, h);
  const tf = (y) => (logY ? Math.log10(Math.max(y, 1e-300)) : y);
  const xs = series.flatMap((s) => s.xs);
  const ys = series.flatMap((s) => s.ys.map(tf));
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(0, ...ys), Math.max(...ys)];
  const px = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const py = (y) => h - pad - ((tf(y) - y0) / (y1 - y0 || 1)) * (h - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#555";
  ctx.fillText(String(x0), pad, h - pad + 14);
  ctx.fillText(String(x1), w - pad - 10, h - pad + 14);
  ctx.fillText((logY ? "1e" : "") + y1.toPrecision(3), 2, pad);
  for (const s of series) {
    ctx.strokeStyle = ctx.fillStyle = s.color;
    ctx.beginPath();
    s.xs.forEach((x, i) => (i ? ctx.lineTo(px(x), py(s.ys[i])) : ctx.moveTo(px(x), py(s.ys[i]))));
    ctx.stroke();
    if (s.dots) s.xs.forEach((x, i) => ctx.fillRect(px(x) - 2, py(s.ys[i]) - 2, 4, 4));
  }
}

function guarded(statId, f) {
  try {
    f();
  } catch (e) {
    $(statId).innerHTML = `<span class="err">${e.message ?? e}</span>`;
  }
}

function curveSeries(points) {
  const xs = points.map((p) => p[0]);
  return [
    { xs, ys: points.map((p) => p[2]), color: "#36c" },
    { xs, ys: points.map((p) => p[1]), color: "#c33", dots: true },
  ];
}

function drawLclt() {
  const n = +$("lclt-n").value;
  $("lclt-n-val").textContent = n;
  guarded("lclt-stat", () => {
    const r = JSON.parse(lclt_curve($("lclt-seq").value, n));
    plot($("lclt"), curveSeries(r.points));
    const d = r.discrepancy;
    $("lclt-stat").textContent = `sup |exact - limit| = ${d.sup.toExponential(3)} at k = ${d.argmax}; sqrt(n) sup = ${d.scaled_sup.toFixed(4)}`;
  });
}

function drawMl() {
  const n = +$("ml-n").value;
  $("ml-n-val").textContent = n;
  guarded("ml-stat", () => {
    const r = JSON.parse(ml_shape(n, 2));
    plot($("ml"), curveSeries(r.points));
    $("ml-stat").textContent = `sup over |k - n/2| <= 2 sqrt(n): ${r.discrepancy.sup.toExponential(3)}`;
  });
}

function drawRay() {
  guarded("ray-stat", () => {
    const r = JSON.parse(ray_errors(+$("ray-p").value, +$("ray-q").value));
    const xs = r.rows.map((row) => row[0]);
    plot(
      $("ray"),
      [
        { xs, ys: r.rows.map((row) => Math.abs(row[3])), color: "#c33", dots: true },
        { xs, ys: r.rows.map((row) => Math.abs(row[4])), color: "#393", dots: true },
      ],
      { logY: true },
    );
    const last = r.rows[r.rows.length - 1];
    $("ray-stat").textContent =
      `|relative error| (log scale): B red, ML green. At t = ${last[0]}: B ${last[3].toExponential(2)}, ML ${last[4].toExponential(2)}` +
      (r.in_band ? "" : " (direction outside the compact band)");
  });
}

await init();
$("lclt-seq").onchange = drawLclt;
$("lclt-n").oninput = drawLclt;
$("ml-n").oninput = drawMl;
$("ray-p").onchange = $("ray-q").onchange = drawRay;
drawLclt();
drawMl();
drawRay();
