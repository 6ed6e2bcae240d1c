import { AgreementPoller } from "./agreement.js";
import { AnnotationApi } from "./api.js";
import { bindKeyboard } from "./keyboard.js";
import { renderAgreement, renderSession } from "./render.js";
import { AnnotationSession } from "./state.js";

export interface App {
  session: AnnotationSession;
  poller: AgreementPoller;
  teardown: () => void;
}

/** Wire state, rendering, keyboard and polling onto the page. */
export function createApp(
  root: Document,
  annotatorId: string,
  baseUrl = "",
  pollIntervalMs = 4000,
): App {
  const api = new AnnotationApi(baseUrl);
  const session = new AnnotationSession(api, annotatorId);
  const poller = new AgreementPoller(api, pollIntervalMs);

  session.onChange(() => renderSession(root, session.snapshot()));
  poller.onChange(() => renderAgreement(root, poller.state));

  root.querySelector("#btn-hateful")?.addEventListener("click", () => void session.submit("Hateful"));
  root
    .querySelector("#btn-not-hateful")
    ?.addEventListener("click", () => void session.submit("Not-Hateful"));
  root.querySelector("#btn-undo")?.addEventListener("click", () => session.undo());
  root.querySelector("#btn-retry")?.addEventListener("click", () => void session.retry());

  const unbind = bindKeyboard(root, {
    onLabel: (label) => void session.submit(label),
    onUndo: () => session.undo(),
  });

  const annotatorBadge = root.querySelector("#annotator-id");
  if (annotatorBadge) annotatorBadge.textContent = annotatorId;

  void session.start();
  poller.start();

  return {
    session,
    poller,
    teardown: () => {
      unbind();
      poller.stop();
    },
  };
}
