// DOM renderer: full redraw of scene, HUD, and overlays from a
// ViewModel. Turn-based cadence makes rebuild-everything cheap enough.

import type { ViewModel } from "./viewmodel";

export interface RenderHandlers {
  onAcknowledge: () => void;
}

const TILE_CLASSES: Record<string, string> = {
  "#": "wall",
  ".": "floor",
  "*": "path",
  G: "gate",
  D: "diamond",
  P: "player",
  r: "red-man",
  B: "bob-active",
  b: "bob-waiting",
  v: "bob-rescued",
};

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderScene(vm: ViewModel): HTMLElement {
  const wrap = el("div", "scene-wrap");
  const cols = vm.tiles[0]?.length ?? 0;
  const scene = el("div", "scene");
  scene.style.setProperty("--cols", String(cols));
  for (const row of vm.tiles) {
    for (const ch of row) {
      scene.appendChild(el("span", `cell ${TILE_CLASSES[ch] ?? "tile"}`, ch === "#" ? "" : ch));
    }
  }
  wrap.appendChild(scene);

  const sprites = el("div", "sprites");
  sprites.style.setProperty("--cols", String(cols));
  for (const agent of vm.agents) {
    const sprite = el("span", `sprite ${agent.kind}`);
    sprite.dataset.id = agent.id;
    sprite.dataset.kind = agent.kind;
    sprite.style.gridRowStart = String(agent.pos[0] + 1);
    sprite.style.gridColumnStart = String(agent.pos[1] + 1);
    sprite.title = agent.id;
    sprites.appendChild(sprite);
  }
  wrap.appendChild(sprites);
  return wrap;
}

function renderHud(vm: ViewModel): HTMLElement {
  const hud = el("aside", "hud");
  const status = el("div", "status");
  status.appendChild(el("span", "level", `Level ${vm.level}`));
  status.appendChild(el("span", "phase", vm.phase));
  status.appendChild(el("span", "tick", `tick ${vm.tick}`));
  hud.appendChild(status);

  const score = el("div", "score");
  score.appendChild(el("span", "label", "Score"));
  score.appendChild(el("b", "value", String(vm.score)));
  hud.appendChild(score);

  const health = el("div", "health");
  health.appendChild(el("span", "label", "Health"));
  const bar = el("div", "health-bar");
  const fill = el("div", "health-fill");
  fill.style.width = `${Math.max(0, Math.min(100, vm.health))}%`;
  bar.appendChild(fill);
  health.appendChild(bar);
  health.appendChild(el("span", "value", String(vm.health)));
  hud.appendChild(health);

  hud.appendChild(el("pre", "minimap", vm.minimap.join("\n")));

  const instructions = el("ol", "instructions");
  for (const line of vm.instructions) instructions.appendChild(el("li", undefined, line));
  hud.appendChild(instructions);

  if (vm.slopes.length > 0) {
    const slopes = el("ul", "slopes");
    for (const readout of vm.slopes) {
      const item = el("li", "slope", `${readout.direction}: ${readout.slope.toFixed(1)}`);
      item.dataset.edge = readout.edge_id;
      slopes.appendChild(item);
    }
    hud.appendChild(slopes);
  }

  if (vm.meters.length > 0) {
    const meters = el("dl", "meters");
    for (const meter of vm.meters) {
      meters.appendChild(el("dt", undefined, meter.label));
      meters.appendChild(el("dd", undefined, meter.value));
    }
    hud.appendChild(meters);
  }
  return hud;
}

function renderModal(vm: ViewModel, handlers: RenderHandlers): HTMLElement | null {
  if (!vm.modal) return null;
  const backdrop = el("div", "modal-backdrop");
  const modal = el("div", `modal ${vm.modal.kind}`);
  modal.appendChild(el("p", "modal-text", vm.modal.text));
  if (vm.modal.outcome) {
    modal.appendChild(el("h2", "concept", vm.modal.outcome.concept_name));
    const table = el("table", "mapping");
    for (const [game, concept] of vm.modal.outcome.mapping) {
      const row = el("tr");
      row.appendChild(el("td", undefined, game));
      row.appendChild(el("td", undefined, concept));
      table.appendChild(row);
    }
    modal.appendChild(table);
  }
  const button = el("button", "modal-button", vm.modal.button);
  button.addEventListener("click", handlers.onAcknowledge);
  modal.appendChild(button);
  backdrop.appendChild(modal);
  return backdrop;
}

export function render(root: HTMLElement, vm: ViewModel, handlers: RenderHandlers): void {
  root.textContent = "";
  if (!vm.connected) {
    const overlay = el("div", "reconnect");
    overlay.appendChild(el("p", undefined, "Connection lost. Reconnecting..."));
    root.appendChild(overlay);
    return;
  }
  const layout = el("div", "layout");
  layout.appendChild(renderScene(vm));
  layout.appendChild(renderHud(vm));
  root.appendChild(layout);
  const modal = renderModal(vm, handlers);
  if (modal) root.appendChild(modal);
  if (vm.completed && !vm.modal) {
    root.appendChild(el("div", "banner", "Level complete"));
  }
}
