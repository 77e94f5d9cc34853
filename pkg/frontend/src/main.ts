// DOM wiring only; all behavior lives in state.ts and render.ts.

import { ApiClient, ApiError } from "./api";
import { parseDot } from "./dot";
import { renderGraph, renderPreview, renderError, safeRender, escapeXml } from "./render";
import { SAMPLES } from "./samples";
import { Session, type SessionState } from "./state";

declare global {
  interface Window {
    SCRIPTFIX_BASE_URL?: string;
  }
}

const baseUrl =
  window.SCRIPTFIX_BASE_URL ??
  (import.meta as any).env?.VITE_API_BASE ??
  "http://127.0.0.1:8517";

const api = new ApiClient(baseUrl);

const $ = <T extends HTMLElement>(sel: string): T => {
  const el = document.querySelector<T>(sel);
  if (!el) throw new Error(`missing element ${sel}`);
  return el;
};

const dotInput = $<HTMLTextAreaElement>("#dot-input");
const feedbackInput = $<HTMLTextAreaElement>("#feedback-input");
const scriptPane = $<HTMLDivElement>("#script-pane");
const previewPane = $<HTMLDivElement>("#preview-pane");
const previewMeta = $<HTMLDivElement>("#preview-meta");
const errorBar = $<HTMLDivElement>("#error-bar");
const memoryCounter = $<HTMLSpanElement>("#memory-counter");
const samplePicker = $<HTMLSelectElement>("#sample-picker");
const correctorPicker = $<HTMLSelectElement>("#corrector-picker");

for (const [i, sample] of SAMPLES.entries()) {
  const opt = document.createElement("option");
  opt.value = String(i);
  opt.textContent = sample.name;
  samplePicker.appendChild(opt);
}

const session = new Session(api, paint);

function paint(state: SessionState) {
  errorBar.textContent = state.error ?? "";
  errorBar.hidden = !state.error;
  memoryCounter.textContent = String(state.memorySize);
  document.body.classList.toggle("busy", state.busy);

  scriptPane.innerHTML = state.script
    ? safeRender(() => renderGraph(state.script!))
    : `<p class="empty">paste a script or pick a sample</p>`;

  if (state.preview) {
    const p = state.preview;
    previewPane.innerHTML = safeRender(() =>
      renderPreview(state.script!, p.repaired, p.diff),
    );
    const badge = p.retrieved
      ? `<span class="badge memory-badge" title="record ${p.retrieved.id}">` +
        `from memory, similarity ${p.retrieved.similarity.toFixed(2)}</span>` +
        `<blockquote>${escapeXml(p.retrieved.feedback)}</blockquote>`
      : "";
    const note = p.note ? `<p class="note">${escapeXml(p.note)}</p>` : "";
    previewMeta.innerHTML =
      `<code class="edit-text">${escapeXml(p.edit)}</code>` +
      `<span class="badge">${escapeXml(p.corrector)}</span>${badge}${note}`;
  } else {
    previewPane.innerHTML = "";
    previewMeta.innerHTML = "";
  }
  $<HTMLButtonElement>("#accept-btn").disabled = !state.preview || state.busy;
  $<HTMLButtonElement>("#reject-btn").disabled = !state.preview || state.busy;
  $<HTMLButtonElement>("#preview-btn").disabled = !state.script || state.busy;
}

$<HTMLButtonElement>("#load-btn").addEventListener("click", () => {
  session.loadScript(dotInput.value);
});

samplePicker.addEventListener("change", () => {
  const sample = SAMPLES[Number(samplePicker.value)];
  if (!sample) return;
  dotInput.value = sample.dot;
  feedbackInput.value = "";
  feedbackInput.placeholder = `e.g. ${sample.hint}`;
  session.loadScript(sample.dot);
});

feedbackInput.addEventListener("input", () => session.setFeedback(feedbackInput.value));

$<HTMLButtonElement>("#preview-btn").addEventListener("click", () => {
  const corrector = correctorPicker.value || undefined;
  session.requestPreview(corrector).catch(() => {});
});

$<HTMLButtonElement>("#accept-btn").addEventListener("click", () => {
  session
    .accept()
    .then(() => {
      feedbackInput.value = "";
      void refreshBrowser();
    })
    .catch(() => {});
});

$<HTMLButtonElement>("#reject-btn").addEventListener("click", () => {
  session.reject();
  feedbackInput.focus();
});

// ---- read-only memory browser ----

const browserList = $<HTMLDivElement>("#memory-list");
const browserDetail = $<HTMLDivElement>("#memory-detail");
const searchK = $<HTMLSelectElement>("#search-k");

function recordRow(r: { id: number; feedback: string; goal: string | null; similarity?: number }) {
  const sim = r.similarity !== undefined ? `<span class="badge">${r.similarity.toFixed(2)}</span>` : "";
  return (
    `<button class="record" data-id="${r.id}">#${r.id} ${sim} ` +
    `<em>${escapeXml(r.goal ?? "(no goal)")}</em> ${escapeXml(r.feedback)}</button>`
  );
}

async function refreshBrowser(records?: Parameters<typeof recordRow>[0][]) {
  try {
    const rows = records ?? (await api.memoryList()).records;
    browserList.innerHTML = rows.length
      ? rows.map(recordRow).join("")
      : `<p class="empty">memory is empty; accepted feedback will appear here</p>`;
  } catch (err) {
    browserList.innerHTML = renderError(err instanceof ApiError ? err.message : String(err));
  }
}

browserList.addEventListener("click", async (ev) => {
  const btn = (ev.target as HTMLElement).closest<HTMLButtonElement>(".record");
  if (!btn) return;
  try {
    const rec = await api.memoryDetail(Number(btn.dataset.id));
    browserDetail.innerHTML =
      `<h3>record #${rec.id}</h3>` +
      `<blockquote>${escapeXml(rec.feedback)}</blockquote>` +
      (rec.edit ? `<code class="edit-text">${escapeXml(rec.edit)}</code>` : "") +
      safeRender(() => renderGraph(parseDot(rec.script_dot)));
  } catch (err) {
    browserDetail.innerHTML = renderError(err instanceof Error ? err.message : String(err));
  }
});

$<HTMLButtonElement>("#search-btn").addEventListener("click", async () => {
  const dot = dotInput.value.trim();
  if (!dot) return refreshBrowser();
  try {
    const page = await api.memorySearch(dot, Number(searchK.value));
    await refreshBrowser(page.records);
  } catch (err) {
    browserList.innerHTML = renderError(err instanceof Error ? err.message : String(err));
  }
});

$<HTMLButtonElement>("#list-btn").addEventListener("click", () => void refreshBrowser());

// ---- boot ----

session
  .refreshMemorySize()
  .then(() => refreshBrowser())
  .catch(() => {
    errorBar.hidden = false;
    errorBar.textContent = `service unreachable at ${baseUrl}; is it running?`;
  });
paint(session.state);
