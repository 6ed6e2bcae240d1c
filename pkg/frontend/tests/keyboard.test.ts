import { describe, expect, it } from "vitest";

import { bindKeyboard } from "../src/keyboard.js";
import { textDirection } from "../src/render.js";

function press(key: string, target?: EventTarget, modifiers: Partial<KeyboardEventInit> = {}) {
  const event = new KeyboardEvent("keydown", { key, bubbles: true, cancelable: true, ...modifiers });
  (target ?? document).dispatchEvent(event);
}

describe("bindKeyboard", () => {
  it("maps 1, 2 and u to the handlers", () => {
    const labels: string[] = [];
    let undos = 0;
    const unbind = bindKeyboard(document, {
      onLabel: (label) => labels.push(label),
      onUndo: () => (undos += 1),
    });
    press("1");
    press("2");
    press("u");
    press("U");
    press("x");
    unbind();
    expect(labels).toEqual(["Hateful", "Not-Hateful"]);
    expect(undos).toBe(2);
  });

  it("ignores keys while typing in an input", () => {
    const labels: string[] = [];
    const unbind = bindKeyboard(document, { onLabel: (l) => labels.push(l), onUndo: () => {} });
    const input = document.createElement("input");
    document.body.appendChild(input);
    press("1", input);
    unbind();
    input.remove();
    expect(labels).toEqual([]);
  });

  it("ignores modifier combinations", () => {
    const labels: string[] = [];
    const unbind = bindKeyboard(document, { onLabel: (l) => labels.push(l), onUndo: () => {} });
    press("1", document, { ctrlKey: true });
    press("2", document, { metaKey: true });
    unbind();
    expect(labels).toEqual([]);
  });

  it("stops firing after unbind", () => {
    const labels: string[] = [];
    const unbind = bindKeyboard(document, { onLabel: (l) => labels.push(l), onUndo: () => {} });
    unbind();
    press("1");
    expect(labels).toEqual([]);
  });
});

describe("textDirection", () => {
  it("is rtl only for Urdu", () => {
    expect(textDirection("Urdu")).toBe("rtl");
    expect(textDirection("urdu")).toBe("rtl");
    expect(textDirection("English")).toBe("ltr");
    expect(textDirection("Spanish")).toBe("ltr");
  });
});
