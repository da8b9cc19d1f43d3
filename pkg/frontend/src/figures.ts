/**
 * Chart option builders, one per figure kind.
 *
 * Marker positions are always recomputed from the CSV content (the `m` and
 * `d` columns), never hardcoded: the tracks panels draw vertical lines at
 * 1/(3m) and log10(d)/m, the window inside which the expected track count
 * stays moderate.
 */
import type { EChartsOption, SeriesOption } from "echarts";
import { SchemaError, Table, distinct, num, requireColumns } from "./csv";

export type FigureKind =
  | "tracks"
  | "efficiency"
  | "threshold-heatmap"
  | "bounds-overlay";

export const FIGURE_KINDS: FigureKind[] = [
  "tracks",
  "efficiency",
  "threshold-heatmap",
  "bounds-overlay",
];

export interface TracksMarkers {
  m: number;
  d: number;
  lo: number; // 1 / (3 m)
  hi: number; // log10(d) / m
}

/** Vertical marker positions per multiplicity, recomputed from the data. */
export function computeTracksMarkers(table: Table): TracksMarkers[] {
  requireColumns(table, ["m", "d"], "tracks");
  const out: TracksMarkers[] = [];
  for (const mText of distinct(table, "m")) {
    const row = table.rows.find((r) => r.m === mText)!;
    const m = num(row, "m");
    const d = num(row, "d");
    if (m <= 0 || d <= 0) {
      throw new SchemaError(`non-positive m or d (m=${m}, d=${d})`);
    }
    out.push({ m, d, lo: 1 / (3 * m), hi: Math.log10(d) / m });
  }
  return out;
}

function median(values: number[]): number {
  const v = [...values].sort((a, b) => a - b);
  const mid = Math.floor(v.length / 2);
  return v.length % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2;
}

const TRACKS_REFERENCE_Y = 6000;

/** Tracks vs alpha: per-m panel with the reference line at y = 6000. */
export function tracksOption(table: Table): EChartsOption {
  requireColumns(table, ["alpha", "tracks", "m", "d"], "tracks");
  const markers = computeTracksMarkers(table);
  const grids: object[] = [];
  const xAxes: object[] = [];
  const yAxes: object[] = [];
  const series: SeriesOption[] = [];
  const titles: object[] = [];
  const panelW = 100 / markers.length;

  markers.forEach((mk, i) => {
    const rows = table.rows.filter((r) => num(r, "m") === mk.m);
    const points = rows.map((r) => [num(r, "alpha"), num(r, "tracks")]);
    const byAlpha = new Map<number, number[]>();
    for (const [a, t] of points) {
      if (!byAlpha.has(a)) byAlpha.set(a, []);
      byAlpha.get(a)!.push(t);
    }
    const medians = [...byAlpha.entries()]
      .sort((p, q) => p[0] - q[0])
      .map(([a, ts]) => [a, median(ts)]);

    grids.push({
      left: `${(panelW * i + 6).toFixed(2)}%`,
      width: `${(panelW - 10).toFixed(2)}%`,
      bottom: "14%",
      top: "12%",
    });
    xAxes.push({ gridIndex: i, type: "value", name: "alpha", min: 0, max: 1 });
    // keep the reference line inside the visible range
    const top = Math.max(TRACKS_REFERENCE_Y, ...points.map((p) => p[1]));
    yAxes.push({
      gridIndex: i,
      type: "value",
      name: i === 0 ? "tracks" : "",
      max: Math.ceil((1.1 * top) / 500) * 500,
    });
    titles.push({
      text: `m = ${mk.m}, d = ${mk.d}`,
      left: `${(panelW * i + panelW / 2).toFixed(2)}%`,
      textAlign: "center",
      textStyle: { fontSize: 12 },
    });
    series.push({
      type: "scatter",
      name: `runs (m=${mk.m})`,
      xAxisIndex: i,
      yAxisIndex: i,
      data: points,
      symbolSize: 4,
      itemStyle: { opacity: 0.45 },
    });
    series.push({
      type: "line",
      name: `median (m=${mk.m})`,
      xAxisIndex: i,
      yAxisIndex: i,
      data: medians,
      showSymbol: true,
      markLine: {
        silent: true,
        symbol: "none",
        data: [
          {
            xAxis: mk.lo,
            lineStyle: { color: "#c23531", type: "dashed" },
            label: { formatter: `1/(3m) = ${mk.lo.toFixed(4)}` },
          },
          {
            xAxis: mk.hi,
            lineStyle: { color: "#2f4554", type: "dashed" },
            label: { formatter: `log10(d)/m = ${mk.hi.toFixed(4)}` },
          },
          {
            yAxis: TRACKS_REFERENCE_Y,
            lineStyle: { color: "#61a0a8", type: "solid" },
            label: { formatter: `y = ${TRACKS_REFERENCE_Y}` },
          },
        ],
      },
    });
  });

  return {
    animation: false,
    title: titles as EChartsOption["title"],
    grid: grids as EChartsOption["grid"],
    xAxis: xAxes as EChartsOption["xAxis"],
    yAxis: yAxes as EChartsOption["yAxis"],
    series,
  };
}

/** Efficiency vs thread count, one curve per degree. */
export function efficiencyOption(table: Table): EChartsOption {
  requireColumns(table, ["d", "threads", "efficiency"], "efficiency");
  const threadValues = distinct(table, "threads")
    .map(Number)
    .sort((a, b) => a - b);
  const series: SeriesOption[] = distinct(table, "d").map((dText) => ({
    type: "line",
    name: `d = ${dText}`,
    data: threadValues.map((p) => {
      const row = table.rows.find(
        (r) => r.d === dText && num(r, "threads") === p,
      );
      return row ? [p, 100 * num(row, "efficiency")] : [p, null];
    }),
  }));
  return {
    animation: false,
    legend: { top: 0 },
    grid: { bottom: "12%", top: "14%" },
    xAxis: {
      type: "log",
      logBase: 2,
      name: "threads",
    },
    yAxis: { type: "value", name: "efficiency (%)" },
    series,
  };
}

/** Threshold heatmap over (N, d); each cell annotates its alpha*. */
export function thresholdHeatmapOption(table: Table): EChartsOption {
  requireColumns(table, ["N", "d", "alpha_star"], "threshold-heatmap");
  const ds = distinct(table, "d").map(Number).sort((a, b) => a - b);
  const ns = distinct(table, "N").map(Number).sort((a, b) => a - b);
  const cells = table.rows.map((r) => [
    ds.indexOf(num(r, "d")),
    ns.indexOf(num(r, "N")),
    num(r, "alpha_star"),
  ]);
  return {
    animation: false,
    grid: { bottom: "18%", top: "8%" },
    xAxis: { type: "category", data: ds.map(String), name: "d" },
    yAxis: { type: "category", data: ns.map(String), name: "N" },
    visualMap: {
      min: 0,
      max: 1,
      calculable: false,
      orient: "horizontal",
      left: "center",
      bottom: 0,
    },
    series: [
      {
        type: "heatmap",
        data: cells,
        label: {
          show: true,
          formatter: (p) => Number((p.value as number[])[2]).toFixed(3),
        },
      },
    ],
  };
}

/** Saturation-probability bounds with the empirical frequency overlay. */
export function boundsOverlayOption(table: Table): EChartsOption {
  requireColumns(table, ["alpha", "lower", "upper"], "bounds-overlay");
  const rows = [...table.rows].sort(
    (a, b) => num(a, "alpha") - num(b, "alpha"),
  );
  const series: SeriesOption[] = [
    {
      type: "line",
      name: "lower bound",
      data: rows.map((r) => [num(r, "alpha"), num(r, "lower")]),
      lineStyle: { type: "dashed" },
    },
    {
      type: "line",
      name: "upper bound",
      data: rows.map((r) => [num(r, "alpha"), num(r, "upper")]),
      lineStyle: { type: "dashed" },
    },
  ];
  if (table.columns.includes("frequency")) {
    series.push({
      type: "line",
      name: "empirical frequency",
      data: rows.map((r) => [num(r, "alpha"), num(r, "frequency")]),
      showSymbol: true,
    });
  }
  return {
    animation: false,
    legend: { top: 0 },
    grid: { bottom: "12%", top: "14%" },
    xAxis: { type: "value", name: "alpha", min: 0, max: 1 },
    yAxis: { type: "value", name: "Pr(saturation)", min: 0, max: 1 },
    series,
  };
}

export function buildOption(kind: FigureKind, table: Table): EChartsOption {
  switch (kind) {
    case "tracks":
      return tracksOption(table);
    case "efficiency":
      return efficiencyOption(table);
    case "threshold-heatmap":
      return thresholdHeatmapOption(table);
    case "bounds-overlay":
      return boundsOverlayOption(table);
    default: {
      const bad: never = kind;
      throw new SchemaError(`unknown figure kind ${bad}`);
    }
  }
}
