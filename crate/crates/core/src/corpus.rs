//! Small reference nets used by tests, examples and the acceptance suite.

use crate::net::Net;

fn build(b: crate::net::NetBuilder) -> Net {
    b.build().expect("corpus nets are well formed")
}

/// Two transitions competing for one token.
pub fn n1() -> Net {
    build(
        Net::builder("conflict")
            .place("p", 1)
            .transition("a", &["p"], &[])
            .transition("b", &["p"], &[]),
    )
}

/// One token bouncing between two places.
pub fn n2() -> Net {
    build(
        Net::builder("ping-pong")
            .place("p1", 1)
            .place("p2", 0)
            .transition("a", &["p1"], &["p2"])
            .transition("b", &["p2"], &["p1"]),
    )
}

/// `a` disables the self-loop `b`, which returns after one `c`.
pub fn n3() -> Net {
    build(
        Net::builder("delay-1")
            .place("p1", 1)
            .place("p2", 0)
            .transition("a", &["p1"], &["p2"])
            .transition("b", &["p1"], &["p1"])
            .transition("c", &["p2"], &["p1"]),
    )
}

/// Like [`n3`] with a return path of three steps.
pub fn n4() -> Net {
    build(
        Net::builder("delay-3")
            .place("s", 1)
            .place("q1", 0)
            .place("q2", 0)
            .place("q3", 0)
            .transition("a", &["s"], &["q1"])
            .transition("b", &["s"], &["s"])
            .transition("c", &["q1"], &["q2"])
            .transition("d", &["q2"], &["q3"])
            .transition("e", &["q3"], &["s"]),
    )
}

/// A single transition pumping tokens into `p2`.
pub fn n5() -> Net {
    build(
        Net::builder("unbounded")
            .place("p1", 1)
            .place("p2", 0)
            .transition("a", &["p1"], &["p1", "p2"]),
    )
}

/// `inc` blocks the inhibited self-loop `b` until `dec` drains `q` again.
pub fn n6() -> Net {
    build(
        Net::builder("inhibitor-postpone")
            .place("p", 1)
            .place("q", 0)
            .transition("inc", &["p"], &["p", "q"])
            .transition("dec", &["q"], &[])
            .inhibitor_transition("b", &["p"], &["p"], &["q"]),
    )
}

/// Inhibitor net in which the step `a` postpones `b` arbitrarily far.
///
/// `inc` loads `r`, `a` raises the gate `g`, and `clear` may only lower the
/// gate once `r` is drained. At `[1,0,n]` firing `a` pushes `b` back by `n+1`
/// steps, yet `b` never dies.
pub fn inhibitor_gate() -> Net {
    build(
        Net::builder("inhibitor-gate")
            .place("p", 1)
            .place("g", 0)
            .place("r", 0)
            .transition("inc", &["p"], &["p", "r"])
            .transition("drain", &["r"], &[])
            .transition("a", &["p"], &["p", "g"])
            .inhibitor_transition("clear", &["g"], &[], &["r"])
            .inhibitor_transition("b", &["p"], &["p"], &["g"]),
    )
}

/// `a` never disables `b` at an enabling marking but kills it elsewhere:
/// e/l-persistent, not l/l-persistent.
pub fn indirect_kill() -> Net {
    build(
        Net::builder("indirect-kill")
            .place("p1", 1)
            .place("q", 1)
            .place("r", 0)
            .transition("a", &["p1", "q"], &["q"])
            .transition("c", &["q"], &["r"])
            .transition("b", &["p1", "r"], &["p1", "q"]),
    )
}

/// Net whose co-enabling markings for `(a, b)` have two minimal elements,
/// `[1,1,1]` and `[2,0,1]`.
pub fn two_minima() -> Net {
    build(
        Net::builder("two-minima")
            .place("p1", 2)
            .place("p2", 0)
            .place("p3", 1)
            .transition("t", &["p1"], &["p2"])
            .transition("a", &["p1"], &["p1"])
            .transition("b", &["p3"], &["p3"]),
    )
}

/// Every pure net above.
pub fn all_pure() -> Vec<Net> {
    vec![n1(), n2(), n3(), n4(), n5(), indirect_kill(), two_minima()]
}

/// Looks a corpus net up by its name.
pub fn by_name(name: &str) -> Option<Net> {
    [
        n1(),
        n2(),
        n3(),
        n4(),
        n5(),
        n6(),
        inhibitor_gate(),
        indirect_kill(),
        two_minima(),
    ]
    .into_iter()
    .find(|n| n.name() == name)
}
