import { createApp } from "./app.js";

const STORAGE_KEY = "trihate.annotator";

function resolveAnnotatorId(): string {
  const params = new URLSearchParams(window.location.search);
  const fromQuery = params.get("annotator");
  if (fromQuery) {
    localStorage.setItem(STORAGE_KEY, fromQuery);
    return fromQuery;
  }
  const stored = localStorage.getItem(STORAGE_KEY);
  if (stored) return stored;
  const entered = window.prompt("Annotator id:")?.trim() || "anonymous";
  localStorage.setItem(STORAGE_KEY, entered);
  return entered;
}

createApp(document, resolveAnnotatorId());
