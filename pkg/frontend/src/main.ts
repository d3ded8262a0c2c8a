// Browser entry point: connect over WebSocket, map keys to commands,
// and repaint on every state message. The animation-speed setting only
// throttles repaints; it never changes what gets sent.

import { inputMap } from "./input";
import { SessionClient, webSocketTransport } from "./net";
import { render } from "./render";
import { buildViewModel, DISCONNECTED, ViewModel } from "./viewmodel";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app root");

function sessionId(): string {
  const fromUrl = new URLSearchParams(location.search).get("session");
  if (fromUrl) return fromUrl;
  const stored = localStorage.getItem("mlquest-session");
  if (stored) return stored;
  const fresh = `web-${Math.random().toString(36).slice(2, 10)}`;
  localStorage.setItem("mlquest-session", fresh);
  return fresh;
}

let vm: ViewModel = DISCONNECTED;
let dirty = true;
let repaintMs = 50;

const speedSelect = document.getElementById("speed") as HTMLSelectElement | null;
speedSelect?.addEventListener("change", () => {
  repaintMs = Number(speedSelect.value); // rendering cadence only
});

const wsUrl = `${location.protocol === "https:" ? "wss" : "ws"}://${location.host}/ws`;
const client = new SessionClient(sessionId(), webSocketTransport(wsUrl), {
  onState: (msg) => {
    vm = buildViewModel(msg);
    dirty = true;
  },
  onStatus: (connected) => {
    if (!connected) {
      vm = DISCONNECTED;
      dirty = true;
      setTimeout(() => client.connect(), 1000);
    }
  },
});
client.connect();

window.addEventListener("keydown", (ev) => {
  const command = inputMap(ev.code, vm.modal !== null);
  if (command) {
    ev.preventDefault();
    client.send(command);
  }
});

function repaint() {
  if (dirty) {
    dirty = false;
    render(root as HTMLElement, vm, {
      onAcknowledge: () => client.send({ kind: "acknowledge" }),
    });
  }
  setTimeout(repaint, repaintMs);
}
repaint();
