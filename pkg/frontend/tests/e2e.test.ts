// The whole accept loop against a real service instance (spawned in
// serviceSetup.ts): load a flawed tuple, complain, preview the swap,
// accept, and find the banked record again. Repairs and similarities
// all come back from the service; this file only checks what the UI
// layer does with them.

import { beforeAll, describe, expect, inject, it } from "vitest";

import { ApiClient } from "../src/api";
import { renderPreview } from "../src/render";
import { SAMPLES } from "../src/samples";
import { Session } from "../src/state";

const ZOO = SAMPLES[0].dot;
const ZOO_FB = "Get in a car before driving";
const REORDER = "reorder edge between '< drive to the zoo , get in car >'";

let api: ApiClient;

beforeAll(() => {
  api = new ApiClient(inject("baseUrl"));
});

describe("feedback session against the live service", () => {
  it("starts with an empty memory", async () => {
    const health = await api.healthz();
    expect(health.status).toBe("ok");
    expect(health.memory_size).toBe(0);
  });

  it("load, complain, preview the swap, accept, counter goes up", async () => {
    const session = new Session(api);
    await session.refreshMemorySize();
    const sizeBefore = session.state.memorySize;

    expect(session.loadScript(ZOO)).toBe(true);
    session.setFeedback(ZOO_FB);

    const preview = await session.requestPreview("keyword");
    expect(preview.edit).toBe(REORDER);
    expect(preview.feedbackSource).toBe("user");
    expect(preview.diff.swapped?.slice().sort()).toEqual(["drive to the zoo", "get in car"]);

    // the preview SVG carries the swap highlight on both nodes
    const svg = renderPreview(session.state.script!, preview.repaired, preview.diff);
    expect(svg.match(/class="node swapped"/g)).toHaveLength(2);

    const recordId = await session.accept();
    expect(recordId).toBe(0);
    expect(session.state.memorySize).toBe(sizeBefore + 1);
  });

  it("the accepted record is findable in the browser view", async () => {
    const page = await api.memorySearch(ZOO, 1);
    expect(page.records).toHaveLength(1);
    expect(page.records[0].id).toBe(0);
    expect(page.records[0].similarity).toBeCloseTo(1.0, 9);

    const detail = await api.memoryDetail(0);
    expect(detail.feedback).toBe(ZOO_FB);
    expect(detail.edit).toBe(REORDER);
  });

  it("a later visitor with the same script gets the repair from memory", async () => {
    const session = new Session(api);
    session.loadScript(ZOO);
    // no feedback typed; the service falls back to its memory
    const preview = await session.requestPreview("retrieval");
    expect(preview.feedbackSource).toBe("memory");
    expect(preview.retrieved?.id).toBe(0);
    expect(preview.retrieved?.similarity).toBeCloseTo(1.0, 9);
    expect(preview.retrieved?.feedback).toBe(ZOO_FB);
    expect(preview.edit).toBe(REORDER);
    // accepting would store the retrieved phrasing
    expect(session.effectiveFeedback()).toBe(ZOO_FB);
  });

  it("rephrasing never writes", async () => {
    const before = (await api.healthz()).memory_size;
    const session = new Session(api);
    session.loadScript(SAMPLES[1].dot);
    session.setFeedback("something vague that matches no rule");
    await session.requestPreview("keyword");
    session.reject();
    expect((await api.healthz()).memory_size).toBe(before);
  });

  it("surfaces service-side parse errors inline", async () => {
    const session = new Session(api);
    session.loadScript(ZOO);
    session.setFeedback("x");
    // sabotage: send a corrector the service does not have
    await expect(session.requestPreview("psychic")).rejects.toThrow(/psychic/);
    expect(session.state.error).toMatch(/unknown corrector/);
  });
});
