/**
 * wink-nlp wrapper producing the wire-contract shape.
 *
 * The underlying model tags with Universal POS; everything outside the
 * pipeline's coarse tag set collapses to OTHER at this boundary, so the
 * consumer never depends on tagger-internal tag inventories. Noun chunks
 * are maximal ADJ/NOUN/PROPN runs ending on a NOUN/PROPN head, with an
 * immediately preceding determiner or pronoun folded in (the consumer
 * strips those itself).
 */

import winkNLP, { ItemToken, ItsFunction } from "wink-nlp";
import model from "wink-eng-lite-web-model";

export const MODEL_NAME = "wink-eng-lite-web-model";

const nlp = winkNLP(model);
const its = nlp.its;
// its.lemma's signature carries a model-addons parameter the ItsFunction
// union does not model; the runtime contract is the usual one
const lemmaOf = its.lemma as unknown as ItsFunction<string>;

export const COARSE_TAGS = [
  "NOUN", "PROPN", "ADJ", "VERB", "AUX", "DET", "PRON", "OTHER",
] as const;
export type CoarseTag = (typeof COARSE_TAGS)[number];

export interface TagToken {
  text: string;
  lemma: string;
  pos: CoarseTag;
  index: number;
}

export interface ChunkRange {
  start: number;
  end: number;
}

export interface TagResponse {
  tokens: TagToken[];
  noun_chunks: ChunkRange[];
}

const PASS_THROUGH = new Set<string>([
  "NOUN", "PROPN", "ADJ", "VERB", "AUX", "DET", "PRON",
]);

function toCoarse(upos: string): CoarseTag {
  return PASS_THROUGH.has(upos) ? (upos as CoarseTag) : "OTHER";
}

function nounChunks(tags: CoarseTag[]): ChunkRange[] {
  const chunks: ChunkRange[] = [];
  const inRun = (tag: CoarseTag) => tag === "ADJ" || tag === "NOUN" || tag === "PROPN";
  let i = 0;
  while (i < tags.length) {
    if (!inRun(tags[i])) {
      i += 1;
      continue;
    }
    let j = i;
    while (j < tags.length && inRun(tags[j])) j += 1;
    let end = j;
    while (end > i && tags[end - 1] === "ADJ") end -= 1; // trim trailing modifiers
    const hasHead = tags.slice(i, end).some((t) => t === "NOUN" || t === "PROPN");
    if (end > i && hasHead) {
      let start = i;
      if (start > 0 && (tags[start - 1] === "DET" || tags[start - 1] === "PRON")) {
        start -= 1;
      }
      chunks.push({ start, end });
    }
    i = j;
  }
  return chunks;
}

export function tagText(text: string): TagResponse {
  const doc = nlp.readDoc(text);
  const tokens: TagToken[] = [];
  doc.tokens().each((token: ItemToken) => {
    tokens.push({
      text: token.out(its.value),
      lemma: String(token.out(lemmaOf)),
      pos: toCoarse(String(token.out(its.pos))),
      index: tokens.length,
    });
  });
  return { tokens, noun_chunks: nounChunks(tokens.map((t) => t.pos)) };
}
