"""Residual DAG, refinements and witness weights of the reconstructed four-group flow instance."""
from npcspace import vistal
from npcspace.flow import enumerate_refinements, graph_from_squares, max_flow, residual_dag
from npcspace.instances import LAYERED_WITNESS, layered_instance


def fmt(pair):
    A, B = pair
    return "(" + ",".join(sorted(A)) + " | " + ",".join(sorted(B)) + ")"


def main():
    inst = layered_instance()
    g = graph_from_squares(inst.xs, [inst.x_sq[a] for a in inst.xs], inst.ts, [inst.t_sq[b] for b in inst.ts],
                           inst.space.compatible)
    flow = max_flow(g)
    print(f"flow value (normalized): {flow.value}")
    dag = residual_dag(g, flow)
    for k in dag.inner_groups:
        print(f"group {k}: {sorted(x for _, x in dag.groups[k])}")
    print("topological orderings:", dag.topological_orderings())
    T, orthant = inst.target, frozenset(inst.xs)
    refinements = enumerate_refinements(g, flow)
    print(f"{len(refinements)} refinements:")
    for ref in refinements:
        ok = vistal.is_valid_support_sequence(orthant, T, ref, [vistal.EQ] * (len(ref) - 1))
        print(("  valid   " if ok else "  INVALID ") + " ".join(map(fmt, ref)))
    w = LAYERED_WITNESS
    left = sum(w[a] for a in ("x4", "x5", "x6")) / sum(inst.t_sq[b] for b in ("t2", "t3", "t4", "t5"))
    right = sum(w[a] for a in ("x7", "x8")) / sum(inst.t_sq[b] for b in ("t6", "t7"))
    print(f"(P3) comparison at the witness: {left} > {right}")


if __name__ == "__main__":
    main()
