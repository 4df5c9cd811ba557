//! Maximum-weight matching in general graphs.
//!
//! Primal-dual blossom method (Edmonds) in the O(n^3) formulation surveyed by
//! Galil. The decoder needs minimum-weight perfect matchings on complete
//! syndrome graphs; those are obtained by negating weights against the
//! diameter and requesting maximum cardinality. All arithmetic is integral:
//! dual variables are kept at twice their conventional value so that slacks
//! of integer-weight edges stay integers throughout.
//!
//! With debug assertions enabled every solve is certified afterwards by
//! checking dual feasibility and complementary slackness, so a structural bug
//! cannot silently produce a suboptimal matching in tests.

const NONE: isize = -1;

/// Maximum-weight matching of an undirected graph given as distinct-endpoint
/// `(u, v, weight)` triples. Returns, per vertex, the matched partner.
/// With `max_cardinality` the matching is largest possible first and maximum
/// weight among those; otherwise it is maximum weight outright.
pub fn max_weight_matching(
    nvertex: usize,
    edges: &[(usize, usize, i64)],
    max_cardinality: bool,
) -> Vec<Option<usize>> {
    if nvertex == 0 || edges.is_empty() {
        return vec![None; nvertex];
    }
    let mut m = Matcher::new(nvertex, edges, max_cardinality);
    m.solve();
    if cfg!(debug_assertions) {
        m.verify_optimum();
    }
    (0..nvertex)
        .map(|v| {
            if m.mate[v] == NONE {
                None
            } else {
                Some(m.endpoint[m.mate[v] as usize])
            }
        })
        .collect()
}

/// Minimum-weight perfect pairing of `n` points (n even) under a symmetric
/// nonnegative distance. Pairs are reported with the smaller index first.
pub fn min_weight_pairing(n: usize, dist: impl Fn(usize, usize) -> i64) -> Vec<(usize, usize)> {
    assert!(n.is_multiple_of(2), "perfect pairing needs an even point count");
    if n == 0 {
        return Vec::new();
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    let mut dmax = 0;
    for i in 0..n {
        for j in i + 1..n {
            let d = dist(i, j);
            debug_assert!(d >= 0, "pairing distances must be nonnegative");
            dmax = dmax.max(d);
            edges.push((i, j, d));
        }
    }
    // Max-weight max-cardinality on reversed weights is min-weight perfect.
    for e in &mut edges {
        e.2 = dmax - e.2;
    }
    let mate = max_weight_matching(n, &edges, true);
    let mut pairs = Vec::with_capacity(n / 2);
    for (v, m) in mate.iter().enumerate() {
        let w = m.expect("complete graph with even vertex count matches perfectly");
        if v < w {
            pairs.push((v, w));
        }
    }
    pairs
}

struct Matcher<'a> {
    nvertex: usize,
    edges: &'a [(usize, usize, i64)],
    max_cardinality: bool,
    /// endpoint[p] is the vertex at endpoint p; endpoints 2k and 2k+1 belong
    /// to edge k.
    endpoint: Vec<usize>,
    /// neighbend[v] lists the remote endpoints of edges incident to v.
    neighbend: Vec<Vec<usize>>,
    /// mate[v] is the remote endpoint of v's matched edge, or NONE.
    mate: Vec<isize>,
    /// 0 free, 1 S, 2 T, 1|4 marked during scanBlossom, -1 recycled id.
    label: Vec<i8>,
    /// Endpoint through which a vertex or blossom obtained its label.
    labelend: Vec<isize>,
    /// Top-level blossom containing each vertex.
    inblossom: Vec<usize>,
    blossomparent: Vec<isize>,
    /// Base vertex of each blossom; NONE marks an unused blossom id.
    blossombase: Vec<isize>,
    /// Sub-blossoms on the odd cycle, ordered from the base.
    blossomchilds: Vec<Vec<usize>>,
    /// Connecting endpoints between consecutive sub-blossoms.
    blossomendps: Vec<Vec<usize>>,
    /// Least-slack edge towards each S-blossom (delta2/delta3 candidates).
    bestedge: Vec<isize>,
    /// For S-blossoms: least-slack edges to other S-blossoms, one per target.
    blossombestedges: Vec<Option<Vec<usize>>>,
    unusedblossoms: Vec<usize>,
    /// Vertex duals first, blossom duals second, both scaled by two.
    dualvar: Vec<i64>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Matcher<'a> {
    fn new(nvertex: usize, edges: &'a [(usize, usize, i64)], max_cardinality: bool) -> Self {
        let nedge = edges.len();
        let maxweight = edges.iter().map(|e| e.2).max().unwrap_or(0).max(0);
        let mut endpoint = Vec::with_capacity(2 * nedge);
        let mut neighbend = vec![Vec::new(); nvertex];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            assert!(i != j && i < nvertex && j < nvertex, "bad edge ({i}, {j})");
            endpoint.push(i);
            endpoint.push(j);
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let mut dualvar = vec![maxweight; nvertex];
        dualvar.extend(std::iter::repeat_n(0, nvertex));
        Matcher {
            nvertex,
            edges,
            max_cardinality,
            endpoint,
            neighbend,
            mate: vec![NONE; nvertex],
            label: vec![0; 2 * nvertex],
            labelend: vec![NONE; 2 * nvertex],
            inblossom: (0..nvertex).collect(),
            blossomparent: vec![NONE; 2 * nvertex],
            blossombase: (0..nvertex as isize)
                .chain(std::iter::repeat_n(NONE, nvertex))
                .collect(),
            blossomchilds: vec![Vec::new(); 2 * nvertex],
            blossomendps: vec![Vec::new(); 2 * nvertex],
            bestedge: vec![NONE; 2 * nvertex],
            blossombestedges: vec![None; 2 * nvertex],
            unusedblossoms: (nvertex..2 * nvertex).collect(),
            dualvar,
            allowedge: vec![false; nedge],
            queue: Vec::new(),
        }
    }

    /// Slack of edge k, nonnegative for feasible duals.
    fn slack(&self, k: usize) -> i64 {
        let (i, j, wt) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 2 * wt
    }

    /// Vertices contained in blossom b, depth first.
    fn blossom_leaves(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.nvertex {
            out.push(b);
        } else {
            for &t in &self.blossomchilds[b] {
                self.blossom_leaves(t, out);
            }
        }
    }

    /// Gives vertex w label t, propagating S to the mate of a fresh T vertex.
    fn assign_label(&mut self, w: usize, t: i8, p: isize) {
        let b = self.inblossom[w];
        debug_assert!(self.label[w] == 0 && self.label[b] == 0);
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = NONE;
        self.bestedge[b] = NONE;
        if t == 1 {
            let mut leaves = Vec::new();
            self.blossom_leaves(b, &mut leaves);
            self.queue.extend(leaves);
        } else {
            let base = self.blossombase[b] as usize;
            debug_assert!(self.mate[base] >= 0, "T blossom must have a matched base");
            let mate_end = self.mate[base];
            self.assign_label(self.endpoint[mate_end as usize], 1, mate_end ^ 1);
        }
    }

    /// Walks the alternating trees up from both ends of an S-S edge; returns
    /// the base of the first common blossom, or NONE for two distinct trees.
    fn scan_blossom(&mut self, v: usize, w: usize) -> isize {
        let mut path = Vec::new();
        let mut base = NONE;
        let mut v = v as isize;
        let mut w = w as isize;
        while v != NONE || w != NONE {
            let mut b = self.inblossom[v as usize];
            if self.label[b] & 4 != 0 {
                base = self.blossombase[b];
                break;
            }
            debug_assert!(self.label[b] == 1);
            path.push(b);
            self.label[b] |= 4;
            debug_assert!(self.labelend[b] == self.mate[self.blossombase[b] as usize]);
            if self.labelend[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint[self.labelend[b] as usize] as isize;
                b = self.inblossom[v as usize];
                debug_assert!(self.label[b] == 2);
                debug_assert!(self.labelend[b] >= 0);
                v = self.endpoint[self.labelend[b] as usize] as isize;
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] &= !4;
        }
        base
    }

    /// Shrinks the odd cycle through edge k and the common ancestor `base`
    /// into a fresh S-blossom.
    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().expect("blossom ids cannot run out");
        self.blossombase[b] = base as isize;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b as isize;
        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = b as isize;
            path.push(bv);
            endps.push(self.labelend[bv] as usize);
            debug_assert!(self.labelend[bv] >= 0);
            v = self.endpoint[self.labelend[bv] as usize];
            bv = self.inblossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = b as isize;
            path.push(bw);
            endps.push(self.labelend[bw] as usize ^ 1);
            debug_assert!(self.labelend[bw] >= 0);
            w = self.endpoint[self.labelend[bw] as usize];
            bw = self.inblossom[w];
        }
        debug_assert!(self.label[bb] == 1);
        self.blossomchilds[b] = path.clone();
        self.blossomendps[b] = endps;
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0;
        let mut leaves = Vec::new();
        self.blossom_leaves(b, &mut leaves);
        for &leaf in &leaves {
            if self.label[self.inblossom[leaf]] == 2 {
                self.queue.push(leaf);
            }
            self.inblossom[leaf] = b;
        }
        // Merge least-slack edge lists of the sub-blossoms.
        let mut bestedgeto = vec![NONE; 2 * self.nvertex];
        for &bv in &path {
            let nblists: Vec<Vec<usize>> = match self.blossombestedges[bv].take() {
                Some(list) => vec![list],
                None => {
                    let mut sub = Vec::new();
                    self.blossom_leaves(bv, &mut sub);
                    sub.iter()
                        .map(|&leaf| self.neighbend[leaf].iter().map(|&p| p / 2).collect())
                        .collect()
                }
            };
            for nblist in nblists {
                for k in nblist {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.inblossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == 1
                        && (bestedgeto[bj] == NONE
                            || self.slack(k) < self.slack(bestedgeto[bj] as usize))
                    {
                        bestedgeto[bj] = k as isize;
                    }
                }
            }
            self.bestedge[bv] = NONE;
        }
        let best: Vec<usize> = bestedgeto
            .into_iter()
            .filter(|&k| k != NONE)
            .map(|k| k as usize)
            .collect();
        self.bestedge[b] = NONE;
        for &k in &best {
            if self.bestedge[b] == NONE || self.slack(k) < self.slack(self.bestedge[b] as usize) {
                self.bestedge[b] = k as isize;
            }
        }
        self.blossombestedges[b] = Some(best);
    }

    fn child_at(&self, b: usize, j: isize) -> usize {
        let len = self.blossomchilds[b].len() as isize;
        self.blossomchilds[b][(j.rem_euclid(len)) as usize]
    }

    fn endp_at(&self, b: usize, j: isize) -> usize {
        let len = self.blossomendps[b].len() as isize;
        self.blossomendps[b][(j.rem_euclid(len)) as usize]
    }

    /// Undoes a blossom: children become top level; during a stage a
    /// T-blossom additionally relabels the children along its stem.
    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        let childs = self.blossomchilds[b].clone();
        for &s in &childs {
            self.blossomparent[s] = NONE;
            if s < self.nvertex {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s] == 0 {
                self.expand_blossom(s, endstage);
            } else {
                let mut leaves = Vec::new();
                self.blossom_leaves(s, &mut leaves);
                for leaf in leaves {
                    self.inblossom[leaf] = s;
                }
            }
        }
        if !endstage && self.label[b] == 2 {
            debug_assert!(self.labelend[b] >= 0);
            let entrychild = self.inblossom[self.endpoint[self.labelend[b] as usize ^ 1]];
            let mut j = childs.iter().position(|&c| c == entrychild).unwrap() as isize;
            let (jstep, endptrick): (isize, isize) = if j & 1 != 0 {
                j -= childs.len() as isize;
                (1, 0)
            } else {
                (-1, 1)
            };
            let mut p = self.labelend[b];
            while j != 0 {
                // Relabel the T-sub-blossom behind endpoint p.
                self.label[self.endpoint[p as usize ^ 1]] = 0;
                let q = self.endp_at(b, j - endptrick) as isize ^ endptrick ^ 1;
                self.label[self.endpoint[q as usize]] = 0;
                self.assign_label(self.endpoint[p as usize ^ 1], 2, p);
                let fwd = self.endp_at(b, j - endptrick) / 2;
                self.allowedge[fwd] = true;
                j += jstep;
                p = self.endp_at(b, j - endptrick) as isize ^ endptrick;
                self.allowedge[p as usize / 2] = true;
                j += jstep;
            }
            // The base keeps label T without stepping through to its mate.
            let bv = self.child_at(b, j);
            self.label[self.endpoint[p as usize ^ 1]] = 2;
            self.label[bv] = 2;
            self.labelend[self.endpoint[p as usize ^ 1]] = p;
            self.labelend[bv] = p;
            self.bestedge[bv] = NONE;
            j += jstep;
            while self.child_at(b, j) != entrychild {
                let bv = self.child_at(b, j);
                if self.label[bv] == 1 {
                    j += jstep;
                    continue;
                }
                let mut leaves = Vec::new();
                self.blossom_leaves(bv, &mut leaves);
                if let Some(&v) = leaves.iter().find(|&&v| self.label[v] != 0) {
                    debug_assert!(self.label[v] == 2);
                    debug_assert!(self.inblossom[v] == bv);
                    self.label[v] = 0;
                    let base = self.blossombase[bv] as usize;
                    self.label[self.endpoint[self.mate[base] as usize]] = 0;
                    let le = self.labelend[v];
                    self.assign_label(v, 2, le);
                }
                j += jstep;
            }
        }
        self.label[b] = -1;
        self.labelend[b] = NONE;
        self.blossomchilds[b].clear();
        self.blossomendps[b].clear();
        self.blossombase[b] = NONE;
        self.blossombestedges[b] = None;
        self.bestedge[b] = NONE;
        self.unusedblossoms.push(b);
    }

    /// Swaps matched and unmatched edges around the cycle of blossom b so
    /// that vertex v becomes the new base.
    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b as isize {
            t = self.blossomparent[t] as usize;
        }
        if t >= self.nvertex {
            self.augment_blossom(t, v);
        }
        let i = self.blossomchilds[b].iter().position(|&c| c == t).unwrap() as isize;
        let mut j = i;
        let len = self.blossomchilds[b].len() as isize;
        let (jstep, endptrick): (isize, isize) = if i & 1 != 0 {
            j -= len;
            (1, 0)
        } else {
            (-1, 1)
        };
        while j != 0 {
            j += jstep;
            let t = self.child_at(b, j);
            let p = self.endp_at(b, j - endptrick) as isize ^ endptrick;
            if t >= self.nvertex {
                self.augment_blossom(t, self.endpoint[p as usize]);
            }
            j += jstep;
            let t = self.child_at(b, j);
            if t >= self.nvertex {
                self.augment_blossom(t, self.endpoint[p as usize ^ 1]);
            }
            self.mate[self.endpoint[p as usize]] = p ^ 1;
            self.mate[self.endpoint[p as usize ^ 1]] = p;
        }
        self.blossomchilds[b].rotate_left(i as usize);
        self.blossomendps[b].rotate_left(i as usize);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        debug_assert!(self.blossombase[b] == v as isize);
    }

    /// Augments the matching along the path through tight edge k.
    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (mut s, mut p) in [(v, (2 * k + 1) as isize), (w, (2 * k) as isize)] {
            loop {
                let bs = self.inblossom[s];
                debug_assert!(self.label[bs] == 1);
                debug_assert!(self.labelend[bs] == self.mate[self.blossombase[bs] as usize]);
                if bs >= self.nvertex {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.labelend[bs] as usize];
                let bt = self.inblossom[t];
                debug_assert!(self.label[bt] == 2);
                debug_assert!(self.labelend[bt] >= 0);
                s = self.endpoint[self.labelend[bt] as usize];
                let j = self.endpoint[self.labelend[bt] as usize ^ 1];
                debug_assert!(self.blossombase[bt] == t as isize);
                if bt >= self.nvertex {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }

    fn solve(&mut self) {
        for _ in 0..self.nvertex {
            self.label.iter_mut().for_each(|l| *l = 0);
            self.bestedge.iter_mut().for_each(|e| *e = NONE);
            self.blossombestedges.iter_mut().for_each(|b| *b = None);
            self.allowedge.iter_mut().for_each(|a| *a = false);
            self.queue.clear();
            for v in 0..self.nvertex {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == 0 {
                    self.assign_label(v, 1, NONE);
                }
            }
            let mut augmented = false;
            loop {
                while let Some(v) = self.queue.pop() {
                    debug_assert!(self.label[self.inblossom[v]] == 1);
                    let ends = self.neighbend[v].clone();
                    let mut done = false;
                    for p in ends {
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.inblossom[v] == self.inblossom[w] {
                            continue;
                        }
                        let mut kslack = 0;
                        if !self.allowedge[k] {
                            kslack = self.slack(k);
                            if kslack <= 0 {
                                self.allowedge[k] = true;
                            }
                        }
                        if self.allowedge[k] {
                            if self.label[self.inblossom[w]] == 0 {
                                self.assign_label(w, 2, p as isize ^ 1);
                            } else if self.label[self.inblossom[w]] == 1 {
                                let base = self.scan_blossom(v, w);
                                if base >= 0 {
                                    self.add_blossom(base as usize, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    done = true;
                                    break;
                                }
                            } else if self.label[w] == 0 {
                                debug_assert!(self.label[self.inblossom[w]] == 2);
                                self.label[w] = 2;
                                self.labelend[w] = p as isize ^ 1;
                            }
                        } else if self.label[self.inblossom[w]] == 1 {
                            let b = self.inblossom[v];
                            if self.bestedge[b] == NONE
                                || kslack < self.slack(self.bestedge[b] as usize)
                            {
                                self.bestedge[b] = k as isize;
                            }
                        } else if self.label[w] == 0
                            && (self.bestedge[w] == NONE
                                || kslack < self.slack(self.bestedge[w] as usize))
                        {
                            self.bestedge[w] = k as isize;
                        }
                    }
                    if done {
                        break;
                    }
                }
                if augmented {
                    break;
                }

                // No augmenting path under the current duals: pick the
                // smallest feasible dual change.
                let mut deltatype = -1;
                let mut delta = 0i64;
                let mut deltaedge = 0usize;
                let mut deltablossom = 0usize;
                if !self.max_cardinality {
                    deltatype = 1;
                    delta = self.dualvar[..self.nvertex].iter().copied().min().unwrap();
                }
                for v in 0..self.nvertex {
                    if self.label[self.inblossom[v]] == 0 && self.bestedge[v] != NONE {
                        let d = self.slack(self.bestedge[v] as usize);
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 2;
                            deltaedge = self.bestedge[v] as usize;
                        }
                    }
                }
                for b in 0..2 * self.nvertex {
                    if self.blossomparent[b] == NONE
                        && self.label[b] == 1
                        && self.bestedge[b] != NONE
                    {
                        let kslack = self.slack(self.bestedge[b] as usize);
                        debug_assert!(kslack % 2 == 0, "S-S slack must stay even");
                        let d = kslack / 2;
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 3;
                            deltaedge = self.bestedge[b] as usize;
                        }
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] >= 0
                        && self.blossomparent[b] == NONE
                        && self.label[b] == 2
                        && (deltatype == -1 || self.dualvar[b] < delta)
                    {
                        delta = self.dualvar[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if deltatype == -1 {
                    // Max-cardinality optimum reached; finish with a final
                    // dual adjustment so the certificate below checks out.
                    debug_assert!(self.max_cardinality);
                    deltatype = 1;
                    delta = self.dualvar[..self.nvertex]
                        .iter()
                        .copied()
                        .min()
                        .unwrap()
                        .max(0);
                }

                for v in 0..self.nvertex {
                    match self.label[self.inblossom[v]] {
                        1 => self.dualvar[v] -= delta,
                        2 => self.dualvar[v] += delta,
                        _ => {}
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] >= 0 && self.blossomparent[b] == NONE {
                        match self.label[b] {
                            1 => self.dualvar[b] += delta,
                            2 => self.dualvar[b] -= delta,
                            _ => {}
                        }
                    }
                }

                match deltatype {
                    1 => break,
                    2 => {
                        self.allowedge[deltaedge] = true;
                        let (mut i, j, _) = self.edges[deltaedge];
                        if self.label[self.inblossom[i]] == 0 {
                            i = j;
                        }
                        debug_assert!(self.label[self.inblossom[i]] == 1);
                        self.queue.push(i);
                    }
                    3 => {
                        self.allowedge[deltaedge] = true;
                        let (i, _, _) = self.edges[deltaedge];
                        debug_assert!(self.label[self.inblossom[i]] == 1);
                        self.queue.push(i);
                    }
                    _ => self.expand_blossom(deltablossom, false),
                }
            }
            if !augmented {
                break;
            }
            for b in self.nvertex..2 * self.nvertex {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] >= 0
                    && self.label[b] == 1
                    && self.dualvar[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
    }

    /// Certifies the final matching by LP duality: feasible duals, zero slack
    /// on matched edges, free vertices at zero dual, and positive-dual
    /// blossoms with full internal matchings.
    fn verify_optimum(&self) {
        let min_vdual = self.dualvar[..self.nvertex].iter().copied().min().unwrap();
        let offset = if self.max_cardinality { (-min_vdual).max(0) } else { 0 };
        assert!(min_vdual + offset >= 0);
        assert!(self.dualvar[self.nvertex..].iter().all(|&z| z >= 0));
        for (k, &(i, j, wt)) in self.edges.iter().enumerate() {
            let mut s = self.dualvar[i] + self.dualvar[j] - 2 * wt;
            let mut iblossoms = vec![i];
            let mut jblossoms = vec![j];
            while self.blossomparent[*iblossoms.last().unwrap()] != NONE {
                iblossoms.push(self.blossomparent[*iblossoms.last().unwrap()] as usize);
            }
            while self.blossomparent[*jblossoms.last().unwrap()] != NONE {
                jblossoms.push(self.blossomparent[*jblossoms.last().unwrap()] as usize);
            }
            iblossoms.reverse();
            jblossoms.reverse();
            for (&bi, &bj) in iblossoms.iter().zip(jblossoms.iter()) {
                if bi != bj {
                    break;
                }
                s += 2 * self.dualvar[bi];
            }
            assert!(s >= 0, "negative slack on edge {k}");
            let edge_of = |m: isize| if m >= 0 { m / 2 } else { NONE };
            if edge_of(self.mate[i]) == k as isize || edge_of(self.mate[j]) == k as isize {
                assert!(edge_of(self.mate[i]) == k as isize && edge_of(self.mate[j]) == k as isize);
                assert!(s == 0, "matched edge {k} is not tight");
            }
        }
        for v in 0..self.nvertex {
            assert!(self.mate[v] >= 0 || self.dualvar[v] + offset == 0);
        }
        for b in self.nvertex..2 * self.nvertex {
            if self.blossombase[b] >= 0 && self.dualvar[b] > 0 {
                assert!(self.blossomendps[b].len() % 2 == 1);
                for &p in self.blossomendps[b].iter().skip(1).step_by(2) {
                    assert!(self.mate[self.endpoint[p]] == p as isize ^ 1);
                    assert!(self.mate[self.endpoint[p ^ 1]] == p as isize);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::trial_rng;
    use rand::Rng;

    fn weight_of(edges: &[(usize, usize, i64)], mate: &[Option<usize>]) -> i64 {
        edges
            .iter()
            .filter(|&&(i, j, _)| mate[i] == Some(j))
            .map(|&(_, _, w)| w)
            .sum()
    }

    fn cardinality(mate: &[Option<usize>]) -> usize {
        mate.iter().flatten().count() / 2
    }

    /// All matchings by branching on each edge, returning (cardinality,
    /// weight) maxima under the two objectives.
    fn brute_best(
        nvertex: usize,
        edges: &[(usize, usize, i64)],
        max_cardinality: bool,
    ) -> (usize, i64) {
        fn go(
            edges: &[(usize, usize, i64)],
            used: &mut Vec<bool>,
            k: usize,
            card: usize,
            weight: i64,
            best: &mut Vec<(usize, i64)>,
        ) {
            if k == edges.len() {
                best.push((card, weight));
                return;
            }
            go(edges, used, k + 1, card, weight, best);
            let (i, j, w) = edges[k];
            if !used[i] && !used[j] {
                used[i] = true;
                used[j] = true;
                go(edges, used, k + 1, card + 1, weight + w, best);
                used[i] = false;
                used[j] = false;
            }
        }
        let mut all = Vec::new();
        go(edges, &mut vec![false; nvertex], 0, 0, 0, &mut all);
        if max_cardinality {
            let cmax = all.iter().map(|&(c, _)| c).max().unwrap();
            (
                cmax,
                all.iter().filter(|&&(c, _)| c == cmax).map(|&(_, w)| w).max().unwrap(),
            )
        } else {
            let wmax = all.iter().map(|&(_, w)| w).max().unwrap();
            let c = all
                .iter()
                .filter(|&&(_, w)| w == wmax)
                .map(|&(c, _)| c)
                .max()
                .unwrap();
            (c, wmax)
        }
    }

    #[test]
    fn trivial_graphs() {
        assert_eq!(max_weight_matching(0, &[], false), vec![]);
        assert_eq!(max_weight_matching(2, &[(0, 1, 1)], false), vec![Some(1), Some(0)]);
        // The middle edge outweighs the pair of outer edges.
        let path = [(0, 1, 5), (1, 2, 11), (2, 3, 5)];
        assert_eq!(
            max_weight_matching(4, &path, false),
            vec![None, Some(2), Some(1), None]
        );
        // Maximum cardinality flips the choice.
        assert_eq!(
            max_weight_matching(4, &path, true),
            vec![Some(1), Some(0), Some(3), Some(2)]
        );
    }

    #[test]
    fn negative_weights_used_only_under_max_cardinality() {
        let edges = [(0, 1, 2), (0, 2, -2), (1, 2, 1), (1, 3, -1), (2, 3, -6)];
        assert_eq!(
            max_weight_matching(4, &edges, false),
            vec![Some(1), Some(0), None, None]
        );
        assert_eq!(
            max_weight_matching(4, &edges, true),
            vec![Some(2), Some(3), Some(0), Some(1)]
        );
    }

    #[test]
    fn blossom_formation_and_expansion() {
        // Creates an S-blossom and uses it for augmentation.
        let edges = [(0, 1, 8), (0, 2, 9), (1, 2, 10), (2, 3, 7)];
        assert_eq!(
            max_weight_matching(4, &edges, false),
            vec![Some(1), Some(0), Some(3), Some(2)]
        );
        // Expands an S-blossom after augmentation elsewhere.
        let edges = [
            (0, 1, 8),
            (0, 2, 9),
            (1, 2, 10),
            (2, 3, 7),
            (0, 5, 5),
            (3, 4, 6),
        ];
        assert_eq!(
            max_weight_matching(6, &edges, false),
            vec![Some(5), Some(2), Some(1), Some(4), Some(3), Some(0)]
        );
    }

    #[test]
    fn random_graphs_match_brute_force() {
        for t in 0..400u64 {
            let mut rng = trial_rng(2024, t);
            let n = rng.gen_range(2..=8);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen::<f64>() < 0.6 {
                        edges.push((i, j, rng.gen_range(-20..=40)));
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            for &maxcard in &[false, true] {
                let mate = max_weight_matching(n, &edges, maxcard);
                let (bc, bw) = brute_best(n, &edges, maxcard);
                let got = (cardinality(&mate), weight_of(&edges, &mate));
                if maxcard {
                    assert_eq!(got.0, bc, "cardinality mismatch on trial {t}");
                }
                assert_eq!(got.1, bw, "weight mismatch on trial {t}, maxcard {maxcard}");
            }
        }
    }

    #[test]
    fn pairing_matches_brute_force_minimum() {
        fn brute_min(n: usize, d: &dyn Fn(usize, usize) -> i64) -> i64 {
            fn go(rem: &mut Vec<usize>, d: &dyn Fn(usize, usize) -> i64) -> i64 {
                if rem.is_empty() {
                    return 0;
                }
                let a = rem.remove(0);
                let mut best = i64::MAX;
                for idx in 0..rem.len() {
                    let b = rem.remove(idx);
                    best = best.min(d(a, b).saturating_add(go(rem, d)));
                    rem.insert(idx, b);
                }
                rem.insert(0, a);
                best
            }
            go(&mut (0..n).collect(), d)
        }
        for t in 0..60u64 {
            let mut rng = trial_rng(99, t);
            let n = 2 * rng.gen_range(1..=5);
            let pts: Vec<(i64, i64)> =
                (0..n).map(|_| (rng.gen_range(0..30), rng.gen_range(0..30))).collect();
            let d = move |i: usize, j: usize| {
                (pts[i].0 - pts[j].0).abs() + (pts[i].1 - pts[j].1).abs()
            };
            let pairs = min_weight_pairing(n, &d);
            assert_eq!(pairs.len(), n / 2);
            let mut seen = vec![false; n];
            let mut total = 0;
            for &(a, b) in &pairs {
                assert!(!seen[a] && !seen[b] && a < b);
                seen[a] = true;
                seen[b] = true;
                total += d(a, b);
            }
            assert_eq!(total, brute_min(n, &d), "pairing weight not minimal on trial {t}");
        }
    }
}
