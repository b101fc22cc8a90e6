use super::{Builder, Node, NodeId, StrDnnf};
use crate::cnf::Assignment;

impl StrDnnf {
    /// `Σ|a`: assigned literals become constants, which are then absorbed.
    /// Keeps the vtree handle; the edge count never grows.
    pub fn condition(&self, a: &Assignment) -> StrDnnf {
        if a.is_empty() {
            return self.clone();
        }
        let mut out = Builder::new(self.vtree().clone());
        let mut map: Vec<NodeId> = Vec::with_capacity(self.node_count());
        for (i, n) in self.nodes().iter().enumerate() {
            let lam = self.lambda(i as NodeId);
            let id = match *n {
                Node::False => out.zero(),
                Node::True => out.one(lam),
                Node::Lit(l) => match a.get(l.var()) {
                    Some(v) if l.eval(v) => out.one(lam),
                    Some(_) => out.zero(),
                    None => out.lit(l, lam),
                },
                Node::And(x, y) => {
                    let (x, y) = (map[x as usize], map[y as usize]);
                    if out.is_zero(x) || out.is_zero(y) {
                        out.zero()
                    } else if out.is_one(x) && out.is_one(y) {
                        out.one(lam)
                    } else {
                        out.and_raw(x, y, lam).unwrap()
                    }
                }
                Node::Or(x, y) => {
                    let (x, y) = (map[x as usize], map[y as usize]);
                    if out.is_one(x) || out.is_one(y) {
                        out.one(lam)
                    } else if out.is_zero(x) || x == y {
                        y
                    } else if out.is_zero(y) {
                        x
                    } else {
                        out.or_raw(x, y, lam).unwrap()
                    }
                }
            };
            map.push(id);
        }
        out.finish(*map.last().unwrap())
    }
}
