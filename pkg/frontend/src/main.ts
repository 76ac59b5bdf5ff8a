import { Api } from "./api.js";
import { Editor } from "./app.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const editor = new Editor(root, new Api(""));
const fromUrl = window.location.hash.slice(1) || undefined;
void editor.init(fromUrl).then(() => {
  window.location.hash = editor.sessionId;
});
