import { defineConfig } from "vitest/config";

// Runs against a real service instance spawned by the global setup;
// needs the Python package installed (pip install -e ..).
export default defineConfig({
  test: {
    environment: "node",
    include: ["tests/e2e.test.ts"],
    globalSetup: ["tests/serviceSetup.ts"],
    testTimeout: 30000,
    hookTimeout: 60000,
  },
});
