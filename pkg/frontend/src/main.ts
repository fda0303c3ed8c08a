/**
 * Page wiring: one canvas pad, one websocket, one store. Pointer samples are
 * forwarded at the event rate they arrive; everything shown on screen is a
 * render of UiState after the latest message.
 */

import type { SocketLike } from "./client.js";
import { PadSession } from "./client.js";
import { ALPHABET } from "./state.js";
import type { UiState } from "./state.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (el === null) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

const params = new URLSearchParams(location.search);
const server = params.get("server") ?? `ws://${location.hostname || "localhost"}:8000`;
const socket = new WebSocket(`${server}/v1/stream`);

// The session assigns its own narrow handlers, so the structural mismatch
// between MessageEvent and { data: unknown } is safe to cast away.
const session = new PadSession(socket as unknown as SocketLike);

const pad = byId<HTMLCanvasElement>("pad");
const ctx = pad.getContext("2d");
if (ctx === null) {
  throw new Error("canvas 2d context unavailable");
}

function padCoords(event: PointerEvent): [number, number] {
  const rect = pad.getBoundingClientRect();
  return [
    (event.clientX - rect.left) / rect.width,
    (event.clientY - rect.top) / rect.height,
  ];
}

let lastDrawn: [number, number] | null = null;

function drawSegment(x: number, y: number): void {
  if (ctx === null) return;
  const px = x * pad.width;
  const py = y * pad.height;
  if (lastDrawn !== null) {
    ctx.beginPath();
    ctx.moveTo(lastDrawn[0] * pad.width, lastDrawn[1] * pad.height);
    ctx.lineTo(px, py);
    ctx.stroke();
  }
  lastDrawn = [x, y];
}

pad.addEventListener("pointerdown", (event) => {
  pad.setPointerCapture(event.pointerId);
  const [x, y] = padCoords(event);
  lastDrawn = null;
  drawSegment(x, y);
  session.pointerDown(x, y, event.timeStamp);
});

pad.addEventListener("pointermove", (event) => {
  if (!session.capture.inStroke()) return;
  const [x, y] = padCoords(event);
  drawSegment(x, y);
  session.pointerMove(x, y, event.timeStamp);
});

pad.addEventListener("pointerup", (event) => {
  lastDrawn = null;
  session.pointerUp(event.timeStamp);
});

const textOut = byId<HTMLDivElement>("text-out");
const rankedOut = byId<HTMLOListElement>("ranked-out");
const banner = byId<HTMLDivElement>("banner");
const statusOut = byId<HTMLSpanElement>("status");
const trainedOut = byId<HTMLSpanElement>("trained-out");
const modeWrite = byId<HTMLButtonElement>("mode-write");
const modeTemplate = byId<HTMLButtonElement>("mode-template");
const templateControls = byId<HTMLDivElement>("template-controls");
const letterPick = byId<HTMLSelectElement>("letter-pick");
const armedOut = byId<HTMLSpanElement>("armed-out");
const boxSelect = byId<HTMLSelectElement>("box-select");

for (const letter of ALPHABET) {
  const option = document.createElement("option");
  option.value = letter;
  option.textContent = letter;
  letterPick.append(option);
}

byId<HTMLButtonElement>("record-btn").addEventListener("click", () => {
  session.armTemplate(letterPick.value);
});
byId<HTMLButtonElement>("backspace-btn").addEventListener("click", () => {
  session.backspace();
});
modeWrite.addEventListener("click", () => session.setMode("write"));
modeTemplate.addEventListener("click", () => session.setMode("template_record"));
boxSelect.addEventListener("change", () => {
  session.setLetterBox(Number(boxSelect.value));
});

let renderedPairs = 0;

function render(state: UiState): void {
  textOut.textContent = state.text.length > 0 ? state.text : " ";
  statusOut.textContent = state.status;
  statusOut.className = `status ${state.status}`;
  banner.textContent = state.banner ?? "";
  banner.hidden = state.banner === null;
  trainedOut.textContent =
    state.missing.length === 0
      ? `all ${state.trained} letters trained`
      : `untrained: ${state.missing.join(" ")}`;
  armedOut.textContent = state.armedLetter === null ? "none" : state.armedLetter;
  modeWrite.classList.toggle("active", state.mode === "write");
  modeTemplate.classList.toggle("active", state.mode === "template_record");
  templateControls.hidden = state.mode !== "template_record";
  boxSelect.value = String(state.letterBoxIn);

  rankedOut.replaceChildren();
  for (const [letter, distance] of state.ranked.slice(0, 5)) {
    const item = document.createElement("li");
    item.textContent = `${letter}  ${distance.toFixed(1)}`;
    rankedOut.append(item);
  }

  // A finished session means the glyph was consumed; give the pad back.
  if (state.sessionPairs !== renderedPairs) {
    renderedPairs = state.sessionPairs;
    ctx?.clearRect(0, 0, pad.width, pad.height);
  }
}

session.store.subscribe(render);
render(session.store.getState());

ctx.lineWidth = 3;
ctx.lineCap = "round";
ctx.strokeStyle = "#1a6ee0";
