// Keyboard to protocol commands. While a modal is open nothing but
// Acknowledge comes out of here, so movement is gated client-side too
// (the server rejects it regardless).

import type { Command } from "./protocol";

const MOVES: Record<string, Command> = {
  ArrowUp: { kind: "move", direction: "north" },
  KeyW: { kind: "move", direction: "north" },
  ArrowDown: { kind: "move", direction: "south" },
  KeyS: { kind: "move", direction: "south" },
  ArrowLeft: { kind: "move", direction: "west" },
  KeyA: { kind: "move", direction: "west" },
  ArrowRight: { kind: "move", direction: "east" },
  KeyD: { kind: "move", direction: "east" },
};

export function inputMap(code: string, modalOpen: boolean): Command | null {
  if (code === "Enter" || code === "Space") return { kind: "acknowledge" };
  if (modalOpen) return null; // only Acknowledge while a modal is up
  const move = MOVES[code];
  if (move) return move;
  if (code === "KeyR") return { kind: "restart" };
  return null;
}
