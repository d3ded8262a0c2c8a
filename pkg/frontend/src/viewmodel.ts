// Pure projection of the latest server message into what gets drawn.
// No game rules run here: the engine already decided everything and the
// snapshot is authoritative.

import type { AgentView, ModalView, SlopeReadout, Snapshot, StateMessage } from "./protocol";

export interface Meter {
  label: string;
  value: string;
}

export interface ViewModel {
  connected: boolean;
  level: number;
  tick: number;
  phase: string;
  score: number;
  health: number; // 0..100
  tiles: string[]; // scene rows, one glyph per tile
  agents: AgentView[]; // sprite layer on top of the tiles
  minimap: string[];
  instructions: string[];
  slopes: SlopeReadout[]; // empty away from junctions / other levels
  meters: Meter[]; // distance meters and counters, present when tracked
  modal: ModalView | null;
  completed: boolean;
}

export const DISCONNECTED: ViewModel = {
  connected: false,
  level: 0,
  tick: 0,
  phase: "",
  score: 0,
  health: 0,
  tiles: [],
  agents: [],
  minimap: [],
  instructions: [],
  slopes: [],
  meters: [],
  modal: null,
  completed: false,
};

function buildMeters(s: Snapshot): Meter[] {
  const meters: Meter[] = [];
  if (s.distance_player_to_bob !== null) {
    meters.push({ label: "You to Bob", value: s.distance_player_to_bob.toFixed(1) });
  }
  if (s.distance_enemy_to_bob !== null) {
    meters.push({ label: "Nearest red man to Bob", value: s.distance_enemy_to_bob.toFixed(1) });
  }
  if (s.red_men_reached !== null) {
    meters.push({ label: "Red men reached", value: String(s.red_men_reached) });
  }
  if (s.population !== null) {
    meters.push({ label: "Population", value: String(s.population) });
  }
  if (s.bob_tag !== null) {
    meters.push({ label: "Current Bob", value: s.bob_tag });
  }
  return meters;
}

export function buildViewModel(msg: StateMessage): ViewModel {
  const s = msg.snapshot;
  return {
    connected: true,
    level: s.level,
    tick: s.tick,
    phase: s.phase,
    score: s.score,
    health: s.health,
    tiles: [...s.raster],
    agents: [...s.agents],
    minimap: [...s.minimap],
    instructions: [...s.instructions],
    slopes: s.slopes ? [...s.slopes] : [],
    meters: buildMeters(s),
    modal: s.modal,
    completed: s.completed,
  };
}
