import { mount } from "./render.js";
import { AdvisorStore } from "./store.js";

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app container");
}
mount(root, new AdvisorStore());
