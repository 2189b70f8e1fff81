/**
 * Minimal SVG scene builder: enough axes, marks and labels for the three
 * report figures, with no drawing dependencies.
 */

export interface Extent {
  min: number;
  max: number;
}

export type Scale = (value: number) => number;

export function linearScale(domain: Extent, range: Extent): Scale {
  const span = domain.max - domain.min || 1;
  return (v) =>
    range.min + ((v - domain.min) / span) * (range.max - range.min);
}

export function log10Scale(domain: Extent, range: Extent): Scale {
  const lo = Math.log10(domain.min);
  const hi = Math.log10(domain.max);
  const span = hi - lo || 1;
  return (v) =>
    range.min + ((Math.log10(v) - lo) / span) * (range.max - range.min);
}

const esc = (text: string) =>
  text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export class Svg {
  readonly width: number;
  readonly height: number;
  private parts: string[] = [];

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string,
       dash = ""): void {
    const extra = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="1"${extra}/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string): void {
    const attr = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${attr}" fill="none" stroke="${stroke}" stroke-width="1.5"/>`,
    );
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(
      `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${fill}"/>`,
    );
  }

  text(x: number, y: number, content: string, options: {
    anchor?: string; size?: number; rotate?: boolean; fill?: string;
  } = {}): void {
    const anchor = options.anchor ?? "middle";
    const size = options.size ?? 11;
    const fill = options.fill ?? "#222";
    const transform = options.rotate
      ? ` transform="rotate(-90 ${fmt(x)} ${fmt(y)})"`
      : "";
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" font-size="${size}" font-family="sans-serif" fill="${fill}"${transform}>${esc(content)}</text>`,
    );
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">`,
      `<rect width="${this.width}" height="${this.height}" fill="white"/>`,
      ...this.parts,
      "</svg>",
    ].join("\n");
  }
}

function fmt(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(2);
}

export interface Frame {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export const FRAME: Frame = { left: 62, right: 608, top: 30, bottom: 370 };

export function drawAxes(svg: Svg, frame: Frame, xLabel: string,
                         yLabel: string, title: string): void {
  svg.line(frame.left, frame.bottom, frame.right, frame.bottom, "#222");
  svg.line(frame.left, frame.top, frame.left, frame.bottom, "#222");
  svg.text((frame.left + frame.right) / 2, frame.bottom + 34, xLabel);
  svg.text(18, (frame.top + frame.bottom) / 2, yLabel, { rotate: true });
  svg.text((frame.left + frame.right) / 2, 18, title, { size: 13 });
}

export function yTicks(svg: Svg, frame: Frame, scale: Scale,
                       values: number[], format: (v: number) => string): void {
  for (const v of values) {
    const y = scale(v);
    svg.line(frame.left - 4, y, frame.left, y, "#222");
    svg.line(frame.left, y, frame.right, y, "#eee");
    svg.text(frame.left - 8, y + 4, format(v), { anchor: "end", size: 10 });
  }
}

export function niceTicks(extent: Extent, count = 5): number[] {
  const span = extent.max - extent.min || 1;
  const step = 10 ** Math.floor(Math.log10(span / count));
  const scaled = span / count / step;
  const unit = scaled >= 5 ? 10 : scaled >= 2 ? 5 : scaled >= 1 ? 2 : 1;
  const tick = unit * step;
  const start = Math.ceil(extent.min / tick) * tick;
  const out: number[] = [];
  for (let v = start; v <= extent.max + 1e-12; v += tick) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}
