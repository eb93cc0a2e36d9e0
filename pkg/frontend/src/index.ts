export { readHistogramCsv, readBlerCsv, readDeTableCsv, SchemaError } from "./csv.js";
export type { HistogramRow, BlerRow, DeTableRow } from "./csv.js";
export { histogramSeries, blerSeries, deTableSeries } from "./series.js";
export type { HistogramSeries, BlerSeries, DeTableSeries } from "./series.js";
export { renderHistogram, renderBler, renderDeTable } from "./svg.js";
export { renderFile, main } from "./cli.js";
