// Wire types for the session protocol: one JSON object per TCP line or
// WebSocket text frame, version 1. These mirror the server's encoding
// exactly; nothing here evaluates game rules.

export const PROTOCOL_VERSION = 1;

export type Dir = "north" | "south" | "east" | "west";

export type Command =
  | { kind: "move"; direction: Dir }
  | { kind: "acknowledge" }
  | { kind: "restart" };

export interface ClientMessage {
  version: typeof PROTOCOL_VERSION;
  session_id: string;
  seq: number;
  command: Command | null; // null attaches to (or creates) the session
}

export interface AgentView {
  id: string;
  kind: "player" | "red_man" | "bob";
  pos: [number, number]; // row, col
  health: number | null;
  votes: number | null;
}

export interface SlopeReadout {
  direction: Dir;
  slope: number;
  edge_id: string;
}

export interface OutcomeView {
  concept_name: string;
  definition: string;
  mapping: [string, string][];
}

export interface ModalView {
  kind: "warning" | "dialogue" | "outcome";
  text: string;
  button: string;
  outcome: OutcomeView | null;
}

export interface Snapshot {
  version: number;
  level: number;
  tick: number;
  phase: string;
  score: number;
  health: number;
  raster: string[];
  minimap: string[];
  instructions: string[];
  agents: AgentView[];
  modal: ModalView | null;
  slopes: SlopeReadout[] | null;
  distance_player_to_bob: number | null;
  distance_enemy_to_bob: number | null;
  red_men_reached: number | null;
  population: number | null;
  bob_tag: string | null;
  completed: boolean;
}

export interface GameEvent {
  tick: number;
  kind: string;
  payload: Record<string, unknown>;
}

export interface StateMessage {
  version: number;
  kind: "state";
  session_id: string;
  seq_ack: number;
  snapshot: Snapshot;
  events: GameEvent[];
}

export interface ErrorMessage {
  version: number;
  kind: "error";
  session_id: string;
  seq_ack: number;
  error: "bad_seq" | "unknown_session" | "invalid_command" | "parse_error";
  message: string;
}

export type ServerMessage = StateMessage | ErrorMessage;

export class ProtocolError extends Error {}

export function encodeClientMessage(msg: ClientMessage): string {
  return JSON.stringify(msg);
}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

export function decodeServerMessage(text: string): ServerMessage {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch {
    throw new ProtocolError(`not JSON: ${text.slice(0, 80)}`);
  }
  if (!isRecord(data)) throw new ProtocolError("server message is not an object");
  if (data.version !== PROTOCOL_VERSION) throw new ProtocolError(`unsupported version ${data.version}`);
  if (typeof data.seq_ack !== "number" || typeof data.session_id !== "string") {
    throw new ProtocolError("missing seq_ack/session_id");
  }
  if (data.kind === "state") {
    if (!isRecord(data.snapshot) || !Array.isArray(data.events)) {
      throw new ProtocolError("state message missing snapshot/events");
    }
    return data as unknown as StateMessage;
  }
  if (data.kind === "error") {
    if (typeof data.error !== "string" || typeof data.message !== "string") {
      throw new ProtocolError("error message missing error/message");
    }
    return data as unknown as ErrorMessage;
  }
  throw new ProtocolError(`unknown message kind ${String(data.kind)}`);
}
