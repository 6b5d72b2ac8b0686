/** Payload shapes of the analysis service API. The UI performs no metric or
 * layout computation; every number rendered comes from one of these fields. */

export interface TreeNode {
  id: number;
  parent: number | null;
  size: number;
  polarity: 'included' | 'excluded';
  visible: boolean;
  operator: string | null;
  h_avg: number;
  is_baseline: boolean;
  is_focus: boolean;
}

export interface TreeEdge {
  parent: number;
  child: number;
  operator: string | null;
  delta_h_avg: number;
}

export interface TreeSummary {
  root: number;
  baseline: number;
  focus: number;
  nodes: TreeNode[];
  edges: TreeEdge[];
}

export interface Fragment {
  dim: string;
  depth: number;
  row_start: number;
  row_span: number;
  value: number;
  split_group: number | null;
  constrained: boolean;
  salient: boolean;
}

export interface Group {
  id: number;
  members: Fragment[];
  value: number;
  reduced_height: boolean;
  constrained: boolean;
  height_ratio: number;
}

export interface IcicleRow {
  leaf: string;
  nodes: string[];
  key: number;
}

export interface IcicleLayout {
  rows: IcicleRow[];
  fragments: Fragment[];
  groups: Group[];
  color_max: number;
}

export interface DotPoint {
  dim: string;
  x: number;
  y: number;
  size: number;
  sign: number;
  constrained: boolean;
  ancestors: string[];
  salient_descendants: string[];
}

export interface HeatCell {
  depth_bin: number;
  value_bin: number;
  count: number;
  dims: string[];
}

export interface DotPlot {
  depth_bins: number;
  value_bins: number;
  points: DotPoint[];
  heat_cells: HeatCell[];
}

export interface ListRowPayload {
  dim: string;
  label: string;
  value: number;
  constrained: boolean;
}

export interface Distribution {
  kind: 'binary' | 'categorical' | 'numeric-binned';
  support: string[];
  probs: number[];
  counts: number[];
}

export interface CohortDistribution extends Distribution {
  cohort: number;
  size: number;
}

export interface DimensionPayload {
  dim: string;
  label: string;
  baseline: CohortDistribution;
  focus: CohortDistribution;
}

export interface OverlapSummary {
  size_a: number;
  size_b: number;
  size_intersection: number;
  relationship: 'subset' | 'partial' | 'disjoint';
}

export interface Settings {
  t_s: number;
  method: 'breadth-first' | 'depth-first';
  manual_salient: string[];
}

export interface DriftProfilePayload {
  baseline: number;
  focus: number;
  per_dim: Record<string, number>;
  gradients: { child: string; parent: string; delta: number }[];
  salient: string[];
  constrained_explicit: string[];
  constrained_descendants: string[];
  h_avg: number;
  color_max: number;
  warnings: string[];
}
