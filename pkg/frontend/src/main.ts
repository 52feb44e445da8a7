import { fetchTask, scoreRectangles, submitModel } from "./api.js";
import { AnnotationApp } from "./app.js";

const app = new AnnotationApp(document, { fetchTask, scoreRectangles, submitModel });
app.start().catch((err) => {
  const message = document.getElementById("message");
  if (message) {
    message.textContent = `could not load a task: ${err.message}`;
  }
});
