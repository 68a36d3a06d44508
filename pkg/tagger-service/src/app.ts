import express from "express";

import { tagText } from "./tagging";

export const MAX_TEXT_LENGTH = 10_000;

/** Express app factory, so tests can mount it on an ephemeral port. */
export function createApp(): express.Express {
  const app = express();
  app.use(express.json({ limit: "1mb" }));

  app.get("/healthz", (_req, res) => {
    res.status(200).type("text/plain").send("ok");
  });

  app.post("/tag", (req, res) => {
    const text = req.body?.text;
    if (typeof text !== "string" || text.trim().length === 0) {
      res.status(400).json({ error: "body must be {\"text\": non-empty string}" });
      return;
    }
    if (text.length > MAX_TEXT_LENGTH) {
      res.status(413).json({
        error: `text exceeds ${MAX_TEXT_LENGTH} characters`,
      });
      return;
    }
    res.status(200).json(tagText(text));
  });

  return app;
}
