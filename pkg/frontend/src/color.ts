/** Block colors for the three predefined abstraction levels. */
export const LEVEL_COLORS: Readonly<Record<string, string>> = {
  Context: "#f7df6a",
  System: "#a8d08d",
  Component: "#c3a6e0",
};

/**
 * Fill color for an abstraction level.
 *
 * Predefined levels use the fixed palette; custom levels get a hue hashed
 * from the name (FNV-1a), so the same level looks the same in every
 * session without keeping a palette registry anywhere.
 */
export function levelColor(name: string): string {
  const fixed = LEVEL_COLORS[name];
  if (fixed !== undefined) {
    return fixed;
  }
  let hash = 0x811c9dc5;
  for (let i = 0; i < name.length; i += 1) {
    hash ^= name.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return `hsl(${hash % 360}, 45%, 80%)`;
}
