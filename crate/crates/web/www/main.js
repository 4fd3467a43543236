import init, { landscape, network, simulate_run } from "./pkg/idea_evo_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const seed = (id) => BigInt(Math.max(0, Math.floor(num(id))));

function frame(canvas) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  return ctx;
}

function fail(canvas, err) {
  const ctx = frame(canvas);
  ctx.fillStyle = "#b00";
  ctx.fillText(String(err), 10, 20);
}

function drawLandscape() {
  $("l-beta-v").textContent = num("l-beta").toFixed(2);
  $("l-xi-v").textContent = num("l-xi").toFixed(2);
  const canvas = $("l-canvas");
  let data;
  try {
    data = JSON.parse(landscape(seed("l-seed"), num("l-beta"), num("l-xi")));
  } catch (e) {
    return fail(canvas, e);
  }
  const ctx = frame(canvas);
  const pad = 20, w = canvas.width - 2 * pad, h = canvas.height - 2 * pad;
  const series = [["individual", "#ff7f0e"], ["master", "#1f77b4"], ["true", "#000"]];
  for (const [key, colour] of series) {
    ctx.fillStyle = colour;
    data[key].forEach((u, i) => {
      ctx.fillRect(pad + (i / (data[key].length - 1)) * w - 1, pad + (1 - u) * h - 1, 2, 2);
    });
  }
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w, h);
}

function circleGraph(ctx, n, edges, cx, cy, r) {
  const pos = (i) => [cx + r * Math.cos((2 * Math.PI * i) / n), cy + r * Math.sin((2 * Math.PI * i) / n)];
  const degree = new Array(n).fill(0);
  ctx.strokeStyle = "rgba(60, 60, 60, 0.35)";
  ctx.beginPath();
  for (const [u, v] of edges) {
    degree[u]++;
    degree[v]++;
    ctx.moveTo(...pos(u));
    ctx.lineTo(...pos(v));
  }
  ctx.stroke();
  ctx.fillStyle = "#1f77b4";
  degree.forEach((d, i) => {
    const [x, y] = pos(i);
    ctx.beginPath();
    ctx.arc(x, y, 1.5 + Math.sqrt(d), 0, 2 * Math.PI);
    ctx.fill();
  });
}

function drawNetwork() {
  const canvas = $("n-canvas");
  let data;
  try {
    data = JSON.parse(network($("n-topo").value, num("n-size"), seed("n-seed")));
  } catch (e) {
    return fail(canvas, e);
  }
  const c = canvas.width / 2;
  circleGraph(frame(canvas), data.n, data.edges, c, c, c - 20);
}

function drawRun() {
  const canvas = $("r-canvas");
  let data;
  try {
    data = JSON.parse(simulate_run($("r-topo").value, num("r-size"), num("r-beta"), num("r-xi"), num("r-p"), seed("r-seed")));
  } catch (e) {
    $("r-out").textContent = "";
    return fail(canvas, e);
  }
  const ctx = frame(canvas);
  const h = canvas.height;
  circleGraph(ctx, num("r-size"), data.edges, h / 2, h / 2, h / 2 - 15);

  const left = h + 30, pad = 20, w = canvas.width - left - pad;
  const top = data.top_ideas, most = top[0].copies, slot = w / top.length;
  ctx.font = "11px sans-serif";
  ctx.textAlign = "center";
  top.forEach((idea, i) => {
    const bar = ((h - 3 * pad) * idea.copies) / most, x = left + i * slot;
    ctx.fillStyle = `hsl(${120 * idea.true_utility}, 60%, 45%)`;
    ctx.fillRect(x + 4, h - 2 * pad - bar, slot - 8, bar);
    ctx.fillStyle = "#222";
    ctx.fillText(idea.true_utility.toFixed(2), x + slot / 2, h - pad);
    ctx.fillText(String(idea.copies), x + slot / 2, h - 2 * pad - bar - 4);
  });
  $("r-out").textContent = JSON.stringify(data.result, null, 2);
}

await init();
for (const id of ["l-seed", "l-beta", "l-xi"]) $(id).addEventListener("input", drawLandscape);
for (const id of ["n-topo", "n-size", "n-seed"]) $(id).addEventListener("change", drawNetwork);
$("r-go").addEventListener("click", drawRun);
drawLandscape();
drawNetwork();
drawRun();
