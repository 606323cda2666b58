"""
Time-like graphs: orders, cells and the stingy verifier
=======================================================

"""

from tlg import fixtures, find_cells, is_tlg_star, is_tlg_star_star, meet_join, moralize

# two paths from 0 to 5 that cross; vertices t_j = j/5
g = fixtures.crossing()
print("vertices", g.vertex_ids)

# t1 and t2 have two minimal upper bounds, so no join
mj = meet_join(g, 1, 2)
print("join of 1, 2 unique:", mj.unique, "candidates", mj.join_candidates)

# the stingy verifier fails on it, and succeeds on a nested cell graph
print("crossing TLG*:", is_tlg_star(g).verdict)
r = is_tlg_star(fixtures.nested())
print("nested TLG*:", r.verdict, "with", len(r.tower.moves), "tower moves")

# cells of the coupling graph and the extra edges of its moral graph
h = fixtures.coupling()
for c in find_cells(h, half_cells=False):
    print("cell", c.start, "->", c.end, "truly simple" if c.truly_simple else c.classification)
print("moral edges added:", len(moralize(h).edges) - len(h.edges))

# general graphs go through the maximal embedding
print("tree TLG**:", is_tlg_star_star(fixtures.tree()).verdict)
print("two_meets TLG**:", is_tlg_star_star(fixtures.two_meets()).verdict)
