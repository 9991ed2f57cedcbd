import { ApiClient } from "./api.js";
import { ReviewApp } from "./app.js";
import { QueueStore } from "./queueStore.js";

const api = new ApiClient("");
api.author = window.localStorage.getItem("zhwn-author") ?? "";

const store = new QueueStore(api);
store.subscribe(() => {
  if (api.author) window.localStorage.setItem("zhwn-author", api.author);
});

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app container");
}
void new ReviewApp(root, store).start();
