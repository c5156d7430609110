/* Demo page entry: install the same interception hook the extension
   uses (pass-through until enabled), then boot the player against the
   bundled danmaku file. */

import { installInterceptor } from "./interceptor";
import { initPlayer } from "./player";

window.addEventListener("DOMContentLoaded", () => {
  const serviceUrl =
    (document.getElementById("service-url") as HTMLInputElement | null)?.value ??
    "http://127.0.0.1:8731";
  installInterceptor(window, {
    baseUrl: serviceUrl,
    enabled: false, // the player toggle drives live filtering instead
    danmakuUrlPattern: "sample_danmaku\\.xml$",
  });
  void initPlayer(document, "public/sample_danmaku.xml").then((player) => {
    (window as any).sbPlayer = player; // console access for poking around
    player.play();
  });
});
