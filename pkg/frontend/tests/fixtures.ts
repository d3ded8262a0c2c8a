import type { GameEvent, Snapshot, StateMessage } from "../src/protocol";

export function makeSnapshot(overrides: Partial<Snapshot> = {}): Snapshot {
  return {
    version: 1,
    level: 1,
    tick: 0,
    phase: "training",
    score: 0,
    health: 100,
    raster: ["....", ".P*.", "..G."],
    minimap: ["....", ".**.", "..G."],
    instructions: [],
    agents: [{ id: "player", kind: "player", pos: [1, 1], health: 100, votes: null }],
    modal: null,
    slopes: null,
    distance_player_to_bob: null,
    distance_enemy_to_bob: null,
    red_men_reached: null,
    population: null,
    bob_tag: null,
    completed: false,
    ...overrides,
  };
}

export function makeState(
  overrides: Partial<Snapshot> = {},
  events: GameEvent[] = [],
  seqAck = 1,
): StateMessage {
  return {
    version: 1,
    kind: "state",
    session_id: "fixture",
    seq_ack: seqAck,
    snapshot: makeSnapshot(overrides),
    events,
  };
}

export const WARNING_MODAL = {
  kind: "warning" as const,
  text: "Wrong path! The level restarts from the red path.",
  button: "OK",
  outcome: null,
};

export const OUTCOME_MODAL = {
  kind: "outcome" as const,
  text: "A definition of the concept behind the level.",
  button: "Next",
  outcome: {
    concept_name: "Some Concept",
    definition: "A definition of the concept behind the level.",
    mapping: [
      ["walking the red path", "training on labeled examples"],
      ["replaying it in the maze", "predicting on unseen input"],
    ] as [string, string][],
  },
};
