export {
  SchemaError,
  Table,
  loadCsv,
  requireColumns,
  num,
  distinct,
  provenanceSeeds,
} from "./csv";
export {
  FigureKind,
  FIGURE_KINDS,
  TracksMarkers,
  computeTracksMarkers,
  tracksOption,
  efficiencyOption,
  thresholdHeatmapOption,
  boundsOverlayOption,
  buildOption,
} from "./figures";
export { FigureSpec, renderToSvg, renderFile } from "./render";
export { main } from "./cli";
