import { describe, expect, it } from "vitest";
import { inputMap } from "../src/input";

describe("inputMap without a modal", () => {
  it.each([
    ["ArrowUp", "north"],
    ["KeyW", "north"],
    ["ArrowDown", "south"],
    ["KeyS", "south"],
    ["ArrowLeft", "west"],
    ["KeyA", "west"],
    ["ArrowRight", "east"],
    ["KeyD", "east"],
  ])("%s moves %s", (code, direction) => {
    expect(inputMap(code, false)).toEqual({ kind: "move", direction });
  });

  it.each(["Enter", "Space"])("%s acknowledges", (code) => {
    expect(inputMap(code, false)).toEqual({ kind: "acknowledge" });
  });

  it("KeyR restarts", () => {
    expect(inputMap("KeyR", false)).toEqual({ kind: "restart" });
  });

  it.each(["KeyQ", "Escape", "Tab", "ShiftLeft"])("ignores %s", (code) => {
    expect(inputMap(code, false)).toBeNull();
  });
});

describe("inputMap while a modal is open", () => {
  it.each(["ArrowUp", "KeyW", "ArrowDown", "ArrowLeft", "ArrowRight", "KeyD"])(
    "suppresses movement key %s",
    (code) => {
      expect(inputMap(code, true)).toBeNull();
    },
  );

  it("suppresses restart", () => {
    expect(inputMap("KeyR", true)).toBeNull();
  });

  it.each(["Enter", "Space"])("still acknowledges on %s", (code) => {
    expect(inputMap(code, true)).toEqual({ kind: "acknowledge" });
  });
});
