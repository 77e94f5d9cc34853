import { describe, expect, it } from "vitest";

import { DotError, parseDot } from "../src/dot";

const ZOO = `digraph "see an alligator" {
  "find the keys"
  "drive to the zoo"
  "find the keys" -> "drive to the zoo"
}`;

describe("parseDot", () => {
  it("reads what the service emits", () => {
    const g = parseDot(ZOO);
    expect(g.goal).toBe("see an alligator");
    expect(g.nodes.map((n) => n.id)).toEqual(["find the keys", "drive to the zoo"]);
    expect(g.edges).toEqual([["find the keys", "drive to the zoo"]]);
  });

  it("keeps declaration order and defaults label to id", () => {
    const g = parseDot("digraph { c; a; b; a -> b }");
    expect(g.nodes.map((n) => n.id)).toEqual(["c", "a", "b"]);
    expect(g.nodes[0].label).toBe("c");
    expect(g.goal).toBeNull();
  });

  it("takes label attributes and edge chains", () => {
    const g = parseDot('digraph { n0 [label="boil water"]; n1 [label="pour"]; n0 -> n1 -> n0x; }');
    expect(g.nodes.map((n) => n.label)).toEqual(["boil water", "pour", "n0x"]);
    expect(g.edges).toHaveLength(2);
  });

  it("tolerates semicolons, comments, and escapes", () => {
    const g = parseDot('digraph "g" {\n  // a comment\n  "say \\"hi\\"" -> b;\n}');
    expect(g.nodes[0].label).toBe('say "hi"');
  });

  it("implicitly declares edge endpoints", () => {
    const g = parseDot("digraph { a -> b }");
    expect(g.nodes).toHaveLength(2);
  });

  it("drops duplicate edges", () => {
    const g = parseDot("digraph { a -> b; a -> b }");
    expect(g.edges).toHaveLength(1);
  });

  const bad: [string, string][] = [
    ["graph { a }", "digraph"],
    ["digraph { a -> }", "node id"],
    ["digraph { a [color=red] }", "unsupported attribute"],
    ["digraph { a ", "expected '}'"],
    ['digraph { "unterminated }', "unterminated"],
    ["digraph { a } trailing", "trailing"],
    ["", "end of input"],
  ];
  it.each(bad)("rejects %j", (text, needle) => {
    expect(() => parseDot(text)).toThrowError(DotError);
    expect(() => parseDot(text)).toThrowError(new RegExp(needle));
  });
});
