import { ApiClient } from "./api.js";
import { createApp } from "./app.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? (window as any).ROBUSTFILL_API_URL ?? "http://127.0.0.1:8642";

const root = document.getElementById("app");
if (root instanceof HTMLElement) {
  createApp(root, new ApiClient(baseUrl));
}
