// Fixed categorical palette, one colour per sheet index.  Curves with more
// than MAX_COLORED_SHEETS sheets fall back to a neutral stroke and numeric
// labels; the sheet index is always available on hover.

export const MAX_COLORED_SHEETS = 12;

export const SHEET_COLORS: readonly string[] = [
  "#3366cc",
  "#dc3912",
  "#ff9900",
  "#109618",
  "#990099",
  "#0099c6",
  "#dd4477",
  "#66aa00",
  "#b82e2e",
  "#316395",
  "#994499",
  "#22aa99",
];

export const NEUTRAL_SHEET_COLOR = "#5f6672";

export function sheetColor(sheet: number, sheetCount: number): string {
  if (sheetCount > MAX_COLORED_SHEETS || sheet < 0 || sheet >= MAX_COLORED_SHEETS) {
    return NEUTRAL_SHEET_COLOR;
  }
  return SHEET_COLORS[sheet];
}

export function sheetLabel(sheet: number): string {
  return `sheet ${sheet}`;
}

// beyond the palette size every polyline looks the same, so the label is
// the only way to tell sheets apart
export function labelsOnly(sheetCount: number): boolean {
  return sheetCount > MAX_COLORED_SHEETS;
}
