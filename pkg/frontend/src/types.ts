// Shapes shared with the simulation service: the scenario file format and
// the results manifest. Field names match the JSON exactly.

export type RectSpec = { x: number; y: number; w: number; h: number };
export type PointSpec = { x: number; y: number };
export type SizeSpec = { w: number; h: number };

export type SpawnAreaSpec = {
  rect: RectSpec;
  agent_count: number;
  goal_id: string;
};

export type GoalSpec = {
  id: string;
  center: PointSpec;
  radius: number;
};

export type ObstacleSpec = {
  center: PointSpec;
  size: SizeSpec;
  rotation?: number;
};

export type ConfigurationSpec = {
  id: string;
  environment: { width: number; height: number };
  spawn_areas: SpawnAreaSpec[];
  goals: GoalSpec[];
  obstacles?: ObstacleSpec[];
};

export type ScenarioSpec = {
  name: string;
  configurations: ConfigurationSpec[];
};

export type MeanStd = { mean: number; std: number };

export type RunRecord = {
  run: number;
  seed: number;
  metrics: Record<string, number>;
  reference?: Record<string, number>;
  primes?: Record<string, number>;
  phi?: number;
  xi?: number;
};

export type ConfigManifest = {
  id: string;
  agents: number;
  runs: RunRecord[];
  aggregate: {
    metrics: Record<string, MeanStd>;
    reference?: Record<string, MeanStd>;
    primes?: Record<string, MeanStd>;
    phi?: MeanStd;
    xi?: MeanStd;
  };
  files: Record<string, string>;
};

export type Manifest = {
  scenario: string;
  comparable: boolean;
  runs: number;
  seed: number;
  configurations: ConfigManifest[];
  comparability?: {
    criteria: Record<string, boolean>;
    details: string[];
  };
  ranking?: { phi: string[]; xi: string[] };
};

export type JobStatus = {
  job_id: string;
  state: "queued" | "running" | "done" | "failed";
  progress: { completed: number; total: number };
  error?: string;
};
