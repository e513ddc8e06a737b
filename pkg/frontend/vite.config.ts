import { defineConfig } from "vitest/config";

export default defineConfig({
  server: {
    proxy: {
      // Local dev against a running `vocp serve` gateway.
      "/v1": "http://127.0.0.1:8841",
    },
  },
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
  },
});
