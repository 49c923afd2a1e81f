// Console wiring: DOM controls -> virtual hand -> throttled frames over
// the WebSocket; server state messages -> reducer -> view. All robot
// state shown comes from the server.

import { GESTURES, loadTemplates, synthesizeFrame, TemplatesFile, VirtualHand } from "./hand.js";
import { identityPose } from "./math.js";
import { decodeServerMessage, encodeFrame } from "./protocol.js";
import { FrameLimiter } from "./rate.js";
import { applyMessage, ConsoleState, initialState, setConnection } from "./state.js";
import { renderRobot } from "./view3d.js";

const MAX_FPS = 30;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

class Console {
  private templates: TemplatesFile;
  private hand: VirtualHand;
  private state: ConsoleState = initialState();
  private ws: WebSocket | null = null;
  private limiter = new FrameLimiter(MAX_FPS);
  private epoch = performance.now();
  private warning = "";

  constructor(templates: TemplatesFile) {
    this.templates = templates;
    this.hand = { gesture: "Open", pose: identityPose(templates.hand_distance) };
    this.bindControls();
    setInterval(() => this.tick(), 1000 / 60);
  }

  private bindControls(): void {
    const buttons = el<HTMLDivElement>("gestures");
    for (const g of GESTURES) {
      const b = document.createElement("button");
      b.textContent = g;
      b.dataset.gesture = g;
      b.onclick = () => {
        this.hand.gesture = g;
        this.refreshControls();
      };
      buttons.appendChild(b);
    }

    const pad = el<HTMLDivElement>("pad");
    let dragging = false;
    pad.onpointerdown = (e) => {
      dragging = true;
      pad.setPointerCapture(e.pointerId);
    };
    pad.onpointerup = () => (dragging = false);
    pad.onpointermove = (e) => {
      if (!dragging) return;
      // Full pad width sweeps +/-0.15 m; y follows screen direction.
      const rect = pad.getBoundingClientRect();
      this.hand.pose.x = ((e.clientX - rect.left) / rect.width - 0.5) * 0.3;
      this.hand.pose.y = ((e.clientY - rect.top) / rect.height - 0.5) * 0.3;
      this.refreshControls();
    };
    pad.onwheel = (e) => {
      e.preventDefault();
      this.hand.pose.z = Math.min(
        2.0,
        Math.max(0.2, this.hand.pose.z + Math.sign(e.deltaY) * 0.02),
      );
      this.refreshControls();
    };

    for (const axis of ["rx", "ry", "rz"] as const) {
      el<HTMLInputElement>(axis).oninput = (e) => {
        this.hand.pose[axis] = Number((e.target as HTMLInputElement).value);
        this.refreshControls();
      };
    }

    el<HTMLButtonElement>("reset").onclick = () => {
      this.hand.pose = identityPose(this.templates.hand_distance);
      this.refreshControls();
    };
    el<HTMLButtonElement>("connect").onclick = () => this.toggleConnection();
  }

  private toggleConnection(): void {
    if (this.ws) {
      this.ws.close();
      return;
    }
    const url = el<HTMLInputElement>("server").value;
    this.state = setConnection(this.state, "connecting");
    const ws = new WebSocket(url);
    ws.onopen = () => {
      this.state = setConnection(this.state, "connected");
    };
    ws.onmessage = (e) => {
      const msg = decodeServerMessage(String(e.data));
      if (msg) this.state = applyMessage(this.state, msg);
    };
    ws.onclose = () => {
      this.ws = null;
      this.state = setConnection(this.state, "disconnected");
    };
    ws.onerror = () => ws.close();
    this.ws = ws;
  }

  private tick(): void {
    const now = performance.now();
    if (this.ws && this.ws.readyState === WebSocket.OPEN) {
      const result = synthesizeFrame(this.hand, this.templates);
      if (result.ok) {
        this.warning = "";
        const t = (now - this.epoch) / 1000;
        const frame = encodeFrame(t, result.uvz, this.templates.intrinsics.id);
        const out = this.limiter.offer(frame, now) ?? this.limiter.drain(now);
        if (out) this.ws.send(out);
      } else {
        this.warning = result.reason;
      }
    }
    this.render();
  }

  private refreshControls(): void {
    for (const b of el<HTMLDivElement>("gestures").querySelectorAll("button")) {
      b.classList.toggle("active", b.dataset.gesture === this.hand.gesture);
    }
    el<HTMLSpanElement>("hand-pose").textContent =
      `x ${this.hand.pose.x.toFixed(3)}  y ${this.hand.pose.y.toFixed(3)}  ` +
      `z ${this.hand.pose.z.toFixed(3)}  rx ${this.hand.pose.rx.toFixed(0)}  ` +
      `ry ${this.hand.pose.ry.toFixed(0)}  rz ${this.hand.pose.rz.toFixed(0)}`;
  }

  private render(): void {
    const dot = el<HTMLSpanElement>("status");
    dot.className = `dot ${this.state.connection}`;
    el<HTMLSpanElement>("status-text").textContent = this.state.connection;
    el<HTMLButtonElement>("connect").textContent =
      this.state.connection === "disconnected" ? "Connect" : "Disconnect";
    el<HTMLDivElement>("warning").textContent =
      this.warning || (this.state.lastError ? `server: ${this.state.lastError.text}` : "");

    const last = this.state.last;
    el<HTMLSpanElement>("gesture-label").textContent = last ? last.gesture : "-";
    el<HTMLSpanElement>("tracking").textContent = last?.tracking ? "tracking" : "not tracking";
    for (const mode of ["idle", "linear", "angular", "combined"]) {
      el<HTMLSpanElement>(`mode-${mode}`).classList.toggle("active", last?.mode === mode);
    }
    const bars = el<HTMLDivElement>("probs");
    if (last) {
      for (let i = 0; i < GESTURES.length; i++) {
        const bar = bars.children[i] as HTMLDivElement;
        (bar.firstElementChild as HTMLDivElement).style.width =
          `${(last.probs[i] * 100).toFixed(1)}%`;
      }
      el<HTMLSpanElement>("robot-pose").textContent =
        `x ${last.robot.x.toFixed(3)}  y ${last.robot.y.toFixed(3)}  z ${last.robot.z.toFixed(3)}  ` +
        `rx ${last.robot.rx.toFixed(1)}  ry ${last.robot.ry.toFixed(1)}  rz ${last.robot.rz.toFixed(1)}`;
    }
    renderRobot(el<HTMLCanvasElement>("scene"), last ? last.robot : null);

    // Controls only make sense while the session is live.
    const disabled = this.state.connection !== "connected";
    for (const input of document.querySelectorAll("input[type=range], #gestures button")) {
      (input as HTMLInputElement | HTMLButtonElement).disabled = disabled;
    }
  }
}

async function boot(): Promise<void> {
  const res = await fetch("./public/templates.json");
  const templates = loadTemplates(await res.json());
  const bars = el<HTMLDivElement>("probs");
  for (const g of GESTURES) {
    const row = document.createElement("div");
    row.className = "bar";
    row.innerHTML = `<div class="fill"></div><span>${g}</span>`;
    bars.appendChild(row);
  }
  new Console(templates);
}

boot().catch((err) => {
  document.body.innerHTML = `<pre>failed to start: ${err}</pre>`;
});
