import { ApiClient } from "./api.js";
import { WalkthroughController } from "./controller.js";
import { mount } from "./view.js";

const params = new URLSearchParams(window.location.search);
const apiBase = params.get("api") ?? "http://127.0.0.1:8080";

const controller = new WalkthroughController(new ApiClient(apiBase));
const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app element");
}
mount(root, controller);
void controller.start();
