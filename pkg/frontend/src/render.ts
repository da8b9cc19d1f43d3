/**
 * Server-side SVG rendering with provenance embedded in the output.
 *
 * Rendering is a pure function of (CSV content, spec): echarts runs in SSR
 * mode with animation off, so identical inputs produce identical SVG bytes.
 */
import * as fs from "fs";
import * as path from "path";
import * as echarts from "echarts";
import { Table, loadCsv, provenanceSeeds } from "./csv";
import { FigureKind, buildOption } from "./figures";

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  output: string;
  width?: number;
  height?: number;
  title?: string;
}

export function renderToSvg(spec: FigureSpec, table: Table): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: spec.width ?? 900,
    height: spec.height ?? 520,
  });
  const option = buildOption(spec.kind, table);
  if (spec.title) {
    const titles = Array.isArray(option.title)
      ? option.title
      : option.title
        ? [option.title]
        : [];
    option.title = [{ text: spec.title, left: "center", top: 0 }, ...titles];
  }
  chart.setOption(option);
  const svg = canonicalizeClassNames(chart.renderToSVGString());
  chart.dispose();

  // embed the seed list so every figure names the data that produced it
  const seeds = provenanceSeeds(table);
  const caption =
    seeds.length > 0
      ? `source: ${path.basename(spec.input)}; seeds: ${seeds.join(", ")}`
      : `source: ${path.basename(spec.input)}`;
  const desc = `<desc>${escapeXml(caption)}</desc>`;
  return svg.replace(/(<svg[^>]*>)/, `$1${desc}`);
}

/**
 * CSS class names carry process-global counters, so two renders of the same
 * chart differ byte-wise. Renumbering them in order of first appearance makes
 * the output a pure function of the input.
 */
function canonicalizeClassNames(svg: string): string {
  const mapping = new Map<string, string>();
  return svg.replace(/zr\d+-c(\d+)/g, "zr-c$1").replace(/zr\d+-cls-(\d+)/g, (cls) => {
    if (!mapping.has(cls)) {
      mapping.set(cls, `zr-cls-${mapping.size}`);
    }
    return mapping.get(cls)!;
  });
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export function renderFile(spec: FigureSpec): void {
  const table = loadCsv(spec.input);
  const svg = renderToSvg(spec, table);
  fs.writeFileSync(spec.output, svg, "utf8");
}
