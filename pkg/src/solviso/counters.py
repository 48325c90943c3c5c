"""Loop counters threaded through the pipeline.

The enumeration sizes (bases tried, series tried, generator sequences
tried, canonizer search nodes) are the observable the bound assertions
and the benchmark harness record.
"""

from dataclasses import dataclass


@dataclass
class RunCounters:
    bases: int = 0
    series: int = 0
    sequences: int = 0
    canon_nodes: int = 0

    def as_row(self):
        return (self.bases, self.series, self.sequences, self.canon_nodes)
