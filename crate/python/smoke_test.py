"""Quick end-to-end check of the Python bindings. Run after `pip install`."""

import math

import jrt


def main():
    p = jrt.Params(1, 2)
    assert (p.k, p.ell, p.centre_size, p.red_size) == (4, 2, 2, 3)

    thick = jrt.thick_clique(12, 4, 2)
    assert len(thick) == math.comb(6, 2)
    assert thick.max_degree() == 5
    assert jrt.is_member(thick, 1, 2)
    assert jrt.Hypergraph.from_json(thick.to_json()) == thick

    bad = jrt.Hypergraph(7, [[0, 1, 2, 3], [3, 4, 5, 6]], k=4)
    assert not jrt.is_member(bad, 1, 2)
    assert jrt.membership_violation(bad, 1, 2)["size"] == 1
    try:
        jrt.Hypergraph(4, [[0, 9]])
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range edge accepted")

    star = jrt.full_star(19, 4, 2)
    assert len(star) == math.comb(17, 2)
    red = jrt.red_colouring(star, 1, 2)
    assert [0, 1] in red["red"]

    sf = jrt.sunflower(thick.edges, kernel=[0, 1])
    assert sf["maximum"] and len(sf["petals"]) == 5

    res = jrt.decompose(2, 4, [[0, 1]], star.edges)
    assert res["basis"] == [[0, 1]]

    cr = jrt.core(1, 2, [0, 1], star.edges)
    assert cr["removed_order"] == []
    assert jrt.hat_n(1, 2, 19, len(star)) <= 19
    trace = jrt.extract_stars(star, 1, 2)
    assert len(trace["extractions"]) == 1

    out = jrt.build_structure(jrt.two_star_gadget(1, 2, 4), 1, 2)
    gadget = jrt.two_star_gadget(1, 2, 4)
    report = jrt.verify_certificate(gadget, 1, 2, out["certificate"])
    assert report["valid"], report

    search = jrt.min_max_degree(1, 2, 8, 6)
    assert search["status"] == "proved-optimal" and search["value"] == 3
    csv = jrt.phase_scan(1, 2, [8])
    assert csv.splitlines()[1] == "8,6,3,15,7/6,3,4,proved"

    print("python smoke test ok")


if __name__ == "__main__":
    main()
