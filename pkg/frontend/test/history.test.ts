import { describe, expect, it } from "vitest";

import { NavigationHistory } from "../src/history.js";

describe("NavigationHistory", () => {
  it("back after two selections returns the first", () => {
    const history = new NavigationHistory();
    history.push("a");
    history.push("b");
    expect(history.back()).toBe("a");
    expect(history.current()).toBe("a");
  });

  it("forward at the top is a no-op", () => {
    const history = new NavigationHistory();
    history.push("a");
    expect(history.canForward()).toBe(false);
    expect(history.forward()).toBeNull();
    expect(history.current()).toBe("a");
  });

  it("back then forward restores the original selection", () => {
    const history = new NavigationHistory();
    history.push("a");
    history.push("b");
    history.back();
    expect(history.forward()).toBe("b");
  });

  it("collapses consecutive duplicates", () => {
    const history = new NavigationHistory();
    history.push("a");
    history.push("a");
    history.push("a");
    expect(history.entries()).toEqual(["a"]);
    expect(history.canBack()).toBe(false);
  });

  it("push after back drops the forward tail", () => {
    const history = new NavigationHistory();
    history.push("a");
    history.push("b");
    history.push("c");
    history.back();
    history.back();
    history.push("d");
    expect(history.entries()).toEqual(["a", "d"]);
    expect(history.canForward()).toBe(false);
  });

  it("back^k forward^k is the identity for any walk", () => {
    const ids = ["a", "b", "c", "d", "e", "f"];
    for (let walk = 0; walk < 50; walk++) {
      const history = new NavigationHistory();
      let seed = walk * 2654435761 + 1;
      const rand = () => {
        seed = (seed * 48271) % 2147483647;
        return seed / 2147483647;
      };
      const pushes = 1 + Math.floor(rand() * 6);
      for (let i = 0; i < pushes; i++) {
        history.push(ids[Math.floor(rand() * ids.length)]);
      }
      const before = history.current();
      let steps = 0;
      while (history.canBack() && rand() < 0.8) {
        history.back();
        steps += 1;
      }
      for (let i = 0; i < steps; i++) history.forward();
      expect(history.current()).toBe(before);
    }
  });

  it("back and forward never mutate the stack", () => {
    const history = new NavigationHistory();
    history.push("a");
    history.push("b");
    history.push("c");
    const snapshot = [...history.entries()];
    history.back();
    history.back();
    history.forward();
    expect([...history.entries()]).toEqual(snapshot);
  });
});
