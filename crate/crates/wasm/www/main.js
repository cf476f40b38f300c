import init, { pmf_curve, simulate_fit_envelope, influence_index } from "./pkg/zip3_wasm.js";

const $ = (id) => document.getElementById(id);

function frame(canvas, xs, ys) {
  const ctx = canvas.getContext("2d");
  const pad = 40;
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const sx = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (canvas.width - 2 * pad);
  const sy = (y) => canvas.height - pad - ((y - y0) / (y1 - y0 || 1)) * (canvas.height - 2 * pad);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, canvas.width - 2 * pad, canvas.height - 2 * pad);
  ctx.fillStyle = "#555";
  ctx.fillText(y1.toFixed(3), 2, pad + 4);
  ctx.fillText(y0.toFixed(3), 2, canvas.height - pad);
  ctx.fillText(x0.toFixed(1), pad, canvas.height - pad + 14);
  ctx.fillText(x1.toFixed(1), canvas.width - pad - 20, canvas.height - pad + 14);
  return { ctx, sx, sy };
}

function line(ctx, sx, sy, xs, ys, color) {
  ctx.strokeStyle = color;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(sx(x), sy(ys[i])) : ctx.moveTo(sx(x), sy(ys[i]))));
  ctx.stroke();
}

function drawPmf() {
  const mu = +$("mu").value;
  const phi = +$("phi").value;
  $("mu-val").textContent = mu.toFixed(1);
  $("phi-val").textContent = phi.toFixed(1);
  const yMax = Math.ceil(mu + 5 * Math.sqrt(mu * (1 + phi)) + 5);
  const p = Array.from(pmf_curve(mu, phi, yMax));
  const xs = p.map((_, i) => i);
  const { ctx, sx, sy } = frame($("pmf"), [-0.5, yMax + 0.5], [0, ...p]);
  const w = Math.max(2, (sx(1) - sx(0)) * 0.7);
  ctx.fillStyle = "#3b6ea5";
  xs.forEach((x) => ctx.fillRect(sx(x) - w / 2, sy(p[x]), w, sy(0) - sy(p[x])));
}

function runFit() {
  const r = JSON.parse(simulate_fit_envelope(+$("fit-n").value, +$("fit-seed").value, +$("fit-nsim").value));
  if (r.error) {
    $("fit-table").textContent = r.error;
    return;
  }
  const rows = r.names.map(
    (name, j) =>
      `${name.padEnd(8)} ${r.truth[j].toFixed(4).padStart(9)} ${r.estimate[j].toFixed(4).padStart(9)} ${r.std_error[j].toFixed(4).padStart(9)}`
  );
  $("fit-table").textContent =
    `param        truth  estimate        SE\n${rows.join("\n")}\n` +
    `iterations ${r.iterations}, zero fraction ${(100 * r.zero_fraction).toFixed(1)}%`;
  const all = [...r.observed, ...r.lower, ...r.upper];
  const { ctx, sx, sy } = frame($("envelope"), r.theoretical, all);
  line(ctx, sx, sy, r.theoretical, r.lower, "#aaa");
  line(ctx, sx, sy, r.theoretical, r.upper, "#aaa");
  r.theoretical.forEach((x, k) => {
    const inside = r.lower[k] <= r.observed[k] && r.observed[k] <= r.upper[k];
    ctx.fillStyle = inside ? "#222" : "#c0392b";
    ctx.fillRect(sx(x) - 1.5, sy(r.observed[k]) - 1.5, 3, 3);
  });
}

function runInfluence() {
  const r = JSON.parse(influence_index(+$("ld-n").value, +$("ld-seed").value, +$("ld-y").value));
  if (r.error) {
    alert(r.error);
    return;
  }
  const ld = r.ld.map((v) => v ?? 0);
  const xs = ld.map((_, i) => i + 1);
  const { ctx, sx, sy } = frame($("ld"), xs, [0, ...ld]);
  xs.forEach((x, i) => {
    ctx.strokeStyle = i === r.outlier_index ? "#c0392b" : "#3b6ea5";
    ctx.beginPath();
    ctx.moveTo(sx(x), sy(0));
    ctx.lineTo(sx(x), sy(ld[i]));
    ctx.stroke();
  });
}

await init();
$("mu").addEventListener("input", drawPmf);
$("phi").addEventListener("input", drawPmf);
$("fit-run").addEventListener("click", runFit);
$("ld-run").addEventListener("click", runInfluence);
drawPmf();
runFit();
runInfluence();
