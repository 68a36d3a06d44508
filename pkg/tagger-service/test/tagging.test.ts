import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { COARSE_TAGS, TagResponse, tagText } from "../src/tagging";

const contract: { text: string; response: TagResponse }[] = JSON.parse(
  readFileSync(join(__dirname, "fixtures", "contract.json"), "utf-8")
);

function assertSchema(response: TagResponse) {
  const tags = new Set<string>(COARSE_TAGS);
  response.tokens.forEach((token, i) => {
    expect(token.index).toBe(i);
    expect(typeof token.text).toBe("string");
    expect(token.text.length).toBeGreaterThan(0);
    expect(typeof token.lemma).toBe("string");
    expect(tags.has(token.pos)).toBe(true);
  });
  let lastEnd = 0;
  for (const { start, end } of response.noun_chunks) {
    expect(start).toBeGreaterThanOrEqual(lastEnd); // ordered, non-overlapping
    expect(end).toBeGreaterThan(start);
    expect(end).toBeLessThanOrEqual(response.tokens.length);
    const run = response.tokens.slice(start, end);
    expect(run.some((t) => t.pos === "NOUN" || t.pos === "PROPN")).toBe(true);
    lastEnd = end;
  }
}

describe("tagText", () => {
  it("matches the frozen contract fixture exactly", () => {
    for (const { text, response } of contract) {
      expect(tagText(text)).toEqual(response);
    }
  });

  it("contract fixture responses are schema-valid", () => {
    for (const { response } of contract) {
      assertSchema(response);
    }
  });

  it("is deterministic", () => {
    const text = contract[1].text;
    expect(tagText(text)).toEqual(tagText(text));
  });

  it("finds the expected chunk and verb in the probe sentence", () => {
    const { tokens, noun_chunks } = tagText("Software engineers shall act.");
    const act = tokens.find((t) => t.text === "act");
    expect(act?.pos).toBe("VERB");
    expect(act?.lemma).toBe("act");
    expect(noun_chunks[0]).toEqual({ start: 0, end: 2 }); // "Software engineers"
  });

  it("collapses out-of-set tags to OTHER", () => {
    const { tokens } = tagText("Run 12 tests today, quickly!");
    for (const token of tokens) {
      expect(COARSE_TAGS).toContain(token.pos);
    }
    const twelve = tokens.find((t) => t.text === "12");
    expect(twelve?.pos).toBe("OTHER"); // NUM collapses
  });

  it("folds a leading determiner into the chunk", () => {
    const { tokens, noun_chunks } = tagText("They shall serve the public interest.");
    const chunkTexts = noun_chunks.map(({ start, end }) =>
      tokens.slice(start, end).map((t) => t.text).join(" ")
    );
    expect(chunkTexts).toContain("the public interest");
  });
});
