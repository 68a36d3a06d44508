import { createApp } from "./app";
import { MODEL_NAME } from "./tagging";

const port = Number(process.env.PORT ?? 8756);
const requestedModel = process.env.TAGGER_MODEL ?? MODEL_NAME;
if (requestedModel !== MODEL_NAME) {
  // the model is baked in at build time; refuse rather than silently ignore
  console.error(
    `unsupported TAGGER_MODEL ${requestedModel}; this build serves ${MODEL_NAME}`
  );
  process.exit(2);
}

createApp().listen(port, () => {
  console.log(`tagger-service (${MODEL_NAME}) listening on :${port}`);
});
