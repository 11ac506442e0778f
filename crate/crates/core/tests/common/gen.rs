use proptest::prelude::*;

/// Header shared by generated programs: 3 * 3 * 2 = 18 states.
pub const HEADER: &str = "var x in {0..2}\nvar y in {0..2}\nvar c in {H, T}\n";

fn prob() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["0", "1/4", "1/3", "1/2", "3/4", "1"])
}

fn atom(probabilistic: bool, demonic: bool) -> BoxedStrategy<String> {
    let mut base: Vec<BoxedStrategy<String>> = vec![
        Just("SKIP".to_string()).boxed(),
        Just("x := min(x + 1, 2)".to_string()).boxed(),
        Just("y := max(y - 1, 0)".to_string()).boxed(),
        Just("x, y := y, x".to_string()).boxed(),
        Just("c := H".to_string()).boxed(),
        Just("c := T".to_string()).boxed(),
        Just("{x <= y}".to_string()).boxed(),
        Just("y :suchthat y >= x".to_string()).boxed(),
    ];
    if probabilistic {
        base.push(prob().prop_map(|p| format!("x :in 0 <{p}> 2")).boxed());
        base.push(Just("y :dist [0: 1/2, 1: 1/4, 2: 1/4]".to_string()).boxed());
    }
    if demonic {
        base.push(Just("x :in {0, 2}".to_string()).boxed());
        base.push(Just("c :in H |^| T".to_string()).boxed());
    }
    prop::strategy::Union::new(base).boxed()
}

/// Loop-free program text over [`HEADER`]'s variables.
pub fn program(probabilistic: bool, demonic: bool) -> BoxedStrategy<String> {
    atom(probabilistic, demonic)
        .prop_recursive(3, 16, 3, move |inner| {
            let mut arms: Vec<BoxedStrategy<String>> = vec![
                prop::collection::vec(inner.clone(), 2..4).prop_map(|v| format!("({})", v.join("; "))).boxed(),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("IF x = y THEN ({a}) ELSE ({b})")).boxed(),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("IF x <= 1 -> ({a}) [] c = H -> ({b}) FI")).boxed(),
            ];
            if probabilistic {
                arms.push((inner.clone(), prob(), inner.clone()).prop_map(|(a, p, b)| format!("({a}) <{p}> ({b})")).boxed());
            }
            if demonic {
                arms.push((inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) |^| ({b})")).boxed());
            }
            prop::strategy::Union::new(arms).boxed()
        })
        .boxed()
}

/// A loop whose body is a generated program; the guard depends on `x`.
pub fn looping() -> BoxedStrategy<String> {
    (program(true, true), prob())
        .prop_map(|(body, p)| format!("WHILE x < 2 DO ({body}); (x := min(x + 1, 2) <{p}> SKIP) OD"))
        .boxed()
}

/// Post-expectation values for the 18 states, in quarters up to 3.
pub fn post_values() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..=12, 18)
}
