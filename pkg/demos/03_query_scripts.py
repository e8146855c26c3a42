"""
Query scripts
=============

The textual query language: let-bound algebra expressions, one per
line, compiled into a shared operator DAG and executed strictly.
"""

from socialgraph import dsl
from socialgraph.fixtures import cf_fixture

# The collaborative-filtering plan for user 101, written as a script.
SCRIPT = """
# who am I, and what did I visit?
ME  = nsel(G, [id='101'])
G1  = lsel(semijoin(G, ME, (src,src)), [type='visit'])
G1v = naggr(G1, [type='visit'], src, vst, set(tgt))

# everyone else and their visits
OTH = nsel(G, [id!='101'])
G2  = lsel(semijoin(G, OTH, (src,src)), [type='visit'])
G2v = naggr(G2, [type='visit'], src, vst, set(tgt))

# one link per shared destination, scored by profile similarity,
# then collapsed into a single 'match' link per similar peer
G3  = compose(G1v, G2v, (tgt,tgt), {sim: jaccard(lsrc.vst, rsrc.vst)})
G4  = laggr(G3, [sim>0.5], {type: const('match'), sim: any(sim)})
G4m = lsel(G4, [type='match'])

# walk match -> visit and average the carried similarity per destination
G5  = lsel(semijoin(G, nsel(G, [type='destination']), (tgt,src)), [type='visit'])
G6  = compose(semijoin(G4m, G5, (tgt,src)), semijoin(G5, G4m, (src,tgt)), (tgt,src), {sim_sc: copy(l.sim)})
G7  = laggr(G6, [], {score: avg(sim_sc)})
"""

program = dsl.parse(SCRIPT)
print(f"parsed {len(program.stmts)} statements")

plan = dsl.compile(program)
print(f"compiled to {plan.node_count()} DAG nodes, inputs: {plan.leaves}")

results = dsl.execute(plan, {"G": cf_fixture()})
for name in ("G1", "G3", "G4m", "G7"):
    g = results[name]
    print(f"{name}: nodes={len(g.nodes)} links={len(g.links)}")

print("recommendations carried by G7:")
for l in sorted(results["G7"].links.values(), key=lambda l: l.tgt):
    (score,) = l.attrs["score"]
    print(f"  {l.src} -> {l.tgt}  score={score:.6f}")

# Parse errors carry line/column and what was expected.
try:
    dsl.parse("BAD = nsel(G,")
except Exception as e:
    print("parse error:", e)
