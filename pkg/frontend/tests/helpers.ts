import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

/** Mount the real page markup (minus the module script) into jsdom. */
export function mountPage(): void {
  const html = readFileSync(join(here, "..", "static", "index.html"), "utf-8");
  const body = html.match(/<body>([\s\S]*)<\/body>/)![1].replace(/<script[\s\S]*?<\/script>/, "");
  document.body.innerHTML = body;
}

export function pressKey(key: string): void {
  document.dispatchEvent(new KeyboardEvent("keydown", { key, bubbles: true, cancelable: true }));
}

export async function until(check: () => boolean, timeoutMs = 2000): Promise<void> {
  const start = Date.now();
  while (!check()) {
    if (Date.now() - start > timeoutMs) throw new Error("condition not met in time");
    await new Promise((resolve) => setTimeout(resolve, 5));
  }
}

export function text(selector: string): string {
  return document.querySelector(selector)?.textContent ?? "";
}

export function isHidden(selector: string): boolean {
  return (document.querySelector(selector) as HTMLElement).hidden;
}
