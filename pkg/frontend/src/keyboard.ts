import type { LabelValue } from "./types.js";

export interface KeyHandlers {
  onLabel: (label: LabelValue) => void;
  onUndo: () => void;
}

/**
 * Global shortcuts: 1 = Hateful, 2 = Not-Hateful, u = undo last.
 * Ignored while typing in form fields. Returns an unbind function.
 */
export function bindKeyboard(target: Window | Document, handlers: KeyHandlers): () => void {
  const onKeyDown = (event: Event): void => {
    const key = event as KeyboardEvent;
    const element = key.target as HTMLElement | null;
    if (
      element instanceof HTMLInputElement ||
      element instanceof HTMLTextAreaElement ||
      element instanceof HTMLSelectElement
    ) {
      return;
    }
    if (key.ctrlKey || key.metaKey || key.altKey) return;
    switch (key.key) {
      case "1":
        key.preventDefault();
        handlers.onLabel("Hateful");
        break;
      case "2":
        key.preventDefault();
        handlers.onLabel("Not-Hateful");
        break;
      case "u":
      case "U":
        key.preventDefault();
        handlers.onUndo();
        break;
    }
  };
  target.addEventListener("keydown", onKeyDown);
  return () => target.removeEventListener("keydown", onKeyDown);
}
