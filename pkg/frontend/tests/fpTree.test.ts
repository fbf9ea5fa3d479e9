import { describe, expect, it, vi } from "vitest";

import { levelColor } from "../src/color.js";
import { renderFpTree, type FpTreeOptions } from "../src/fpTree.js";
import type { FunctionalModel, Propagation } from "../src/types.js";
import { CONTEXT_PROPAGATIONS } from "./frozen.js";
import { EMPTY_PROPAGATION, loadFixture } from "./stub.js";

const FUNCTIONAL = loadFixture("escooter_fp_context").functional;

function renderTree(overrides: Partial<FpTreeOptions> = {}, functional: FunctionalModel = FUNCTIONAL) {
  const options: FpTreeOptions = {
    decisions: {},
    propagation: EMPTY_PROPAGATION,
    levelFilter: null,
    highlightRules: [],
    focus: null,
    handlers: { onToggle: () => {}, onExclude: () => {} },
    ...overrides,
  };
  const tree = renderFpTree(functional, options);
  document.body.replaceChildren(tree);
  return tree;
}

function statesById(tree: HTMLElement): Map<string, string> {
  const map = new Map<string, string>();
  for (const row of tree.querySelectorAll<HTMLElement>(".fp-block")) {
    map.set(row.dataset.blockId ?? "", row.dataset.state ?? "");
  }
  return map;
}

describe("block states", () => {
  it("locks forced-in and disables forced-out blocks from the payload", () => {
    const propagation = CONTEXT_PROPAGATIONS["{\"fp-simple\":\"In\"}"] as Propagation;
    const tree = renderTree({ propagation });
    const states = statesById(tree);
    for (const id of propagation.forcedIn) {
      expect(states.get(id), id).toBe("locked");
    }
    expect(states.get("fp-comfort")).toBe("disabled");
    expect(states.get("fp-loading")).toBe("open");
  });

  it("shows explicit decisions ahead of forced states", () => {
    const propagation = CONTEXT_PROPAGATIONS["{\"fp-simple\":\"In\"}"] as Propagation;
    const tree = renderTree({ propagation, decisions: { "fp-simple": "In" } });
    const states = statesById(tree);
    expect(states.get("fp-simple")).toBe("in");
    expect(states.get("fp-escooter")).toBe("locked");
  });

  it("marks excluded blocks", () => {
    const tree = renderTree({ decisions: { "fp-loading": "Out" } });
    expect(statesById(tree).get("fp-loading")).toBe("out");
  });

  it("renders everything open without a propagation payload", () => {
    const tree = renderTree({ propagation: null });
    const states = [...statesById(tree).values()];
    expect(new Set(states)).toEqual(new Set(["open"]));
  });
});

describe("interaction", () => {
  it("forwards clicks on open blocks", () => {
    const onToggle = vi.fn();
    const onExclude = vi.fn();
    const tree = renderTree({ handlers: { onToggle, onExclude } });
    tree
      .querySelector<HTMLButtonElement>('[data-block-id="fp-loading"] .fp-toggle')
      ?.click();
    tree
      .querySelector<HTMLButtonElement>('[data-block-id="fp-comfort"] .fp-exclude')
      ?.click();
    expect(onToggle).toHaveBeenCalledWith("fp-loading");
    expect(onExclude).toHaveBeenCalledWith("fp-comfort");
  });

  it("deactivates controls on locked and disabled blocks", () => {
    const propagation = CONTEXT_PROPAGATIONS["{\"fp-simple\":\"In\"}"] as Propagation;
    const tree = renderTree({ propagation });
    const locked = tree.querySelector<HTMLButtonElement>(
      '[data-block-id="fp-escooter"] .fp-toggle',
    );
    const disabled = tree.querySelector<HTMLButtonElement>(
      '[data-block-id="fp-comfort"] .fp-toggle',
    );
    expect(locked?.disabled).toBe(true);
    expect(disabled?.disabled).toBe(true);
    expect(
      tree.querySelector<HTMLButtonElement>('[data-block-id="fp-escooter"] .fp-exclude')?.disabled,
    ).toBe(true);
  });
});

describe("structure and styling", () => {
  it("renders variation points with their labels and cardinalities", () => {
    const tree = renderTree();
    const text = tree.textContent ?? "";
    expect(text).toContain("E-Scooter Type (choose 1)");
    expect(text).toContain("Or (choose 2..3)");
  });

  it("lists cross-tree constraints instead of nesting them", () => {
    const functional = loadFixture("escooter_fp_context_require").functional;
    const tree = renderTree({}, functional);
    const constraints = tree.querySelector(".fp-constraints");
    expect(constraints?.textContent).toContain("Require");
    expect(constraints?.textContent).toContain("Loading Capability");
    expect(constraints?.textContent).toContain("Comfort");
    // the required block keeps its single tree node
    expect(tree.querySelectorAll('[data-block-id="fp-comfort"]').length).toBe(1);
  });

  it("lists all-or-none groups with member names", () => {
    const tree = renderTree();
    const group = tree.querySelector('[data-group-id="grp-stability"]');
    expect(group?.textContent).toContain("Carrying");
    expect(group?.textContent).toContain("Balancing");
  });

  it("hides levels excluded by the filter", () => {
    const tree = renderTree({ levelFilter: new Set(["System"]) });
    const items = [...tree.querySelectorAll<HTMLElement>("li.fp-node")];
    expect(items.length).toBeGreaterThan(0);
    expect(items.every((item) => item.hidden)).toBe(true);
  });

  it("tags blocks with their level and palette color", () => {
    const tree = renderTree();
    const row = tree.querySelector<HTMLElement>('[data-block-id="fp-escooter"]');
    expect(row?.dataset.level).toBe("Context");
    expect(levelColor("Context")).toBe("#f7df6a");
    expect(levelColor("System")).toBe("#a8d08d");
    expect(levelColor("Component")).toBe("#c3a6e0");
  });

  it("hashes custom levels to a stable color", () => {
    expect(levelColor("Mezzanine")).toBe(levelColor("Mezzanine"));
    expect(levelColor("Mezzanine")).toMatch(/^hsl\(/);
    expect(levelColor("Mezzanine")).not.toBe(levelColor("Basement"));
  });

  it("applies highlight rules by element kind", () => {
    const tree = renderTree({ highlightRules: [{ kind: "Feature", color: "#d84315" }] });
    const row = tree.querySelector<HTMLElement>('[data-block-id="fp-escooter"]');
    expect(row?.style.outline).toContain("#d84315");
  });
});
