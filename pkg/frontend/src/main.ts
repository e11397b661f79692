// Browser entry point: the service address comes from ?api=... or defaults
// to the local analysis service.

import { mountApp } from "./app.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "http://127.0.0.1:8750";
const root = document.getElementById("app");
if (root) {
  mountApp(root, baseUrl).catch((err) => {
    root.textContent = `cannot reach the analysis service at ${baseUrl}: ${err}`;
  });
}
