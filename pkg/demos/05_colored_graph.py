"""The colored multigraph: cycle subgraphs, balance, and components.

Each parameter is a color; feedback gains add fresh colors from outputs to
inputs.  Multi-colored cycle subgraphs (disjoint cycles covering every state
vertex, all arc colors distinct) mirror the determinant's monomials: a color
set whose odd- and even-cycle-count covers tie contributes nothing.
"""

from sfspectrum import (
    MultiChannelSystem,
    ParamMatrix,
    ParamPoly,
    build_graph,
    enumerate_cycle_subgraphs,
    export_dot,
    similarity_classes,
    state_only_scc_exists,
)

p = ParamPoly.param

system = MultiChannelSystem(
    n=2,
    channels=((1, 1), (1, 1)),
    A=ParamMatrix.from_rows([[p(0), p(0)], [0, p(1)]], 4),
    B_blocks=(
        ParamMatrix.from_rows([[0], [p(1)]], 4),
        ParamMatrix.from_rows([[p(2)], [0]], 4),
    ),
    C_blocks=(
        ParamMatrix.from_rows([[p(3), 0]], 4),
        ParamMatrix.from_rows([[p(0), p(0)]], 4),
    ),
    q=4,
)

g = build_graph(system)
print(f"graph: {g.vertex_count} vertices, {len(g.arcs)} arcs, "
      f"{g.q} system colors + {g.feedback_colors} feedback colors")
for arc in g.arcs:
    print(f"  {g.vertex_name(arc.src):>3s} -> {g.vertex_name(arc.dst):<3s} "
          f"color {arc.color} ({arc.kind})")

subs = enumerate_cycle_subgraphs(g)
print(f"{len(subs)} multi-colored cycle subgraphs")
for sub in subs:
    cycles = [" -> ".join(g.vertex_name(a.src) for a in cycle) for cycle in sub.cycles]
    print(f"  colors {sorted(sub.color_set)} cycles {cycles}")

for cls in similarity_classes(subs):
    print(f"class {sorted(cls.color_set)}: odd {cls.odd_count}, even {cls.even_count}, "
          f"{'balanced' if cls.balanced else 'unbalanced'}")

print("state-only strongly connected component exists:", state_only_scc_exists(g))
print()
print(export_dot(g))
