// Browser bootstrap: mount the explorer and honor the ?file= query
// parameter for loading a document by URL.

import { ExplorerApp } from "./app.js";

const rootElement = document.getElementById("app");
if (rootElement) {
  const app = new ExplorerApp(rootElement);
  const params = new URLSearchParams(window.location.search);
  const fileUrl = params.get("file");
  if (fileUrl) {
    void app.loadFromUrl(fileUrl);
  }
  // handy for manual poking from the console
  (window as unknown as { explorer: ExplorerApp }).explorer = app;
}
