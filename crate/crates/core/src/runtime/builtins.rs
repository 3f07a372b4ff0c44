//! Reference implementations behind the standard corpus. Each takes the
//! adaptee's argument list in declaration order.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{BuiltinRegistry, RuntimeError, Value};
use crate::typemodel::{Category, Prim, Type};

pub fn standard_registry() -> BuiltinRegistry {
    let mut r = BuiltinRegistry::new();
    r.register("bresenham", |a| {
        let [x0, y0, x1, y1] = ints::<4>(a)?;
        Ok(Some(points(bresenham(x0, y0, x1, y1))))
    });
    r.register("midpoint_circle", |a| {
        let [cx, cy, radius] = ints::<3>(a)?;
        Ok(Some(points(midpoint_circle(cx, cy, radius))))
    });
    r.register("matrix_multiply", |a| {
        let (x, y) = (matrix(arg(a, 0)?)?, matrix(arg(a, 1)?)?);
        Ok(Some(matrix_value(multiply(&x, &y)?)))
    });
    r.register("matrix_add", |a| {
        let (x, y) = (matrix(arg(a, 0)?)?, matrix(arg(a, 1)?)?);
        Ok(Some(matrix_value(zip_cells(&x, &y, i32::wrapping_add)?)))
    });
    r.register("matrix_subtract", |a| {
        let (x, y) = (matrix(arg(a, 0)?)?, matrix(arg(a, 1)?)?);
        Ok(Some(matrix_value(zip_cells(&x, &y, i32::wrapping_sub)?)))
    });
    r.register("matrix_transpose", |a| {
        let m = matrix(arg(a, 0)?)?;
        Ok(Some(matrix_value(transpose(&m)?)))
    });
    r.register("dot_product", |a| {
        let (x, y) = (int_items(arg(a, 0)?)?, int_items(arg(a, 1)?)?);
        if x.len() != y.len() {
            return Err(RuntimeError::Failed("dot product of unequal lengths".into()));
        }
        let dot = x.iter().zip(&y).fold(0i32, |acc, (p, q)| acc.wrapping_add(p.wrapping_mul(*q)));
        Ok(Some(Value::Int(dot)))
    });
    r.register("lcs_int", |a| {
        let (x, y) = (int_items(arg(a, 0)?)?, int_items(arg(a, 1)?)?);
        Ok(Some(int_list(Category::List, lcs(&x, &y))))
    });
    r.register("counting_sort", |a| {
        let mut xs = int_items(arg(a, 0)?)?;
        let descending = match arg(a, 1)? {
            Value::Bool(b) => *b,
            other => return Err(fault("boolean", other)),
        };
        counting_sort(&mut xs);
        if descending {
            xs.reverse();
        }
        Ok(Some(int_array(xs)))
    });
    r.register("remove_duplicates", |a| {
        let mut seen = Vec::new();
        for x in int_items(arg(a, 0)?)? {
            if !seen.contains(&x) {
                seen.push(x);
            }
        }
        Ok(Some(int_list(Category::List, seen)))
    });
    r.register("mean", |a| {
        let xs = double_items(arg(a, 0)?)?;
        if xs.is_empty() {
            return Ok(Some(Value::Double(f64::NAN)));
        }
        Ok(Some(Value::Double(xs.iter().sum::<f64>() / xs.len() as f64)))
    });
    r.register("median", |a| {
        let mut xs = double_items(arg(a, 0)?)?;
        if xs.is_empty() {
            return Ok(Some(Value::Double(f64::NAN)));
        }
        xs.sort_by(f64::total_cmp);
        let mid = xs.len() / 2;
        let m = if xs.len() % 2 == 1 { xs[mid] } else { (xs[mid - 1] + xs[mid]) / 2.0 };
        Ok(Some(Value::Double(m)))
    });
    r.register("primes_between", |a| {
        let [lo, hi] = ints::<2>(a)?;
        let primes = sieve(hi).into_iter().filter(|&p| p >= lo).collect();
        Ok(Some(int_list(Category::List, primes)))
    });
    r.register("count_primes", |a| {
        let [n] = ints::<1>(a)?;
        Ok(Some(Value::Int(sieve(n).len() as i32)))
    });
    r.register("is_anagram", |a| {
        let (Value::Str(x), Value::Str(y)) = (arg(a, 0)?, arg(a, 1)?) else {
            return Err(RuntimeError::TypeFault("is_anagram expects two strings".into()));
        };
        let sorted = |s: &String| {
            let mut cs: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).flat_map(char::to_lowercase).collect();
            cs.sort_unstable();
            cs
        };
        Ok(Some(Value::Bool(sorted(x) == sorted(y))))
    });
    r
}

/// Integer Bresenham over all octants, endpoints included.
pub(crate) fn bresenham(mut x0: i32, mut y0: i32, x1: i32, y1: i32) -> Vec<(i32, i32)> {
    let dx = (i64::from(x1) - i64::from(x0)).abs();
    let dy = -(i64::from(y1) - i64::from(y0)).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    let mut out = Vec::new();
    loop {
        out.push((x0, y0));
        if x0 == x1 && y0 == y1 {
            return out;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
}

/// Midpoint circle, octant points emitted per step in a fixed order.
fn midpoint_circle(cx: i32, cy: i32, radius: i32) -> Vec<(i32, i32)> {
    if radius < 0 {
        return Vec::new();
    }
    let (mut x, mut y, mut d) = (radius, 0, 1 - radius);
    let mut out: Vec<(i32, i32)> = Vec::new();
    while x >= y {
        for (px, py) in [(x, y), (y, x), (-y, x), (-x, y), (-x, -y), (-y, -x), (y, -x), (x, -y)] {
            let p = (cx + px, cy + py);
            if !out.contains(&p) {
                out.push(p);
            }
        }
        y += 1;
        if d < 0 {
            d += 2 * y + 1;
        } else {
            x -= 1;
            d += 2 * (y - x) + 1;
        }
    }
    out
}

fn multiply(a: &[Vec<i32>], b: &[Vec<i32>]) -> Result<Vec<Vec<i32>>, RuntimeError> {
    let inner = b.len();
    let cols = rectangular(b)?;
    if a.iter().any(|row| row.len() != inner) {
        return Err(RuntimeError::Failed("matrix dimensions do not agree".into()));
    }
    Ok(a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(0i32, |acc, k| acc.wrapping_add(row[k].wrapping_mul(b[k][j]))))
                .collect()
        })
        .collect())
}

fn zip_cells(a: &[Vec<i32>], b: &[Vec<i32>], op: fn(i32, i32) -> i32) -> Result<Vec<Vec<i32>>, RuntimeError> {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| x.len() != y.len()) {
        return Err(RuntimeError::Failed("matrix dimensions do not agree".into()));
    }
    Ok(a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| op(*p, *q)).collect()).collect())
}

fn transpose(m: &[Vec<i32>]) -> Result<Vec<Vec<i32>>, RuntimeError> {
    let cols = rectangular(m)?;
    Ok((0..cols).map(|j| m.iter().map(|row| row[j]).collect()).collect())
}

fn rectangular(m: &[Vec<i32>]) -> Result<usize, RuntimeError> {
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|row| row.len() != cols) {
        return Err(RuntimeError::Failed("ragged matrix".into()));
    }
    Ok(cols)
}

/// Longest common subsequence; ties in the backtrack prefer dropping from `b`.
fn lcs(a: &[i32], b: &[i32]) -> Vec<i32> {
    let (n, m) = (a.len(), b.len());
    let mut table = vec![vec![0usize; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            table[i][j] = if a[i] == b[j] { table[i + 1][j + 1] + 1 } else { table[i + 1][j].max(table[i][j + 1]) };
        }
    }
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < n && j < m {
        if a[i] == b[j] {
            out.push(a[i]);
            i += 1;
            j += 1;
        } else if table[i + 1][j] >= table[i][j + 1] {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

fn counting_sort(xs: &mut [i32]) {
    let (Some(&lo), Some(&hi)) = (xs.iter().min(), xs.iter().max()) else {
        return;
    };
    let mut counts = vec![0usize; (i64::from(hi) - i64::from(lo) + 1) as usize];
    for &x in xs.iter() {
        counts[(i64::from(x) - i64::from(lo)) as usize] += 1;
    }
    let mut k = 0;
    for (offset, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            xs[k] = (i64::from(lo) + offset as i64) as i32;
            k += 1;
        }
    }
}

/// Primes up to and including `n`.
fn sieve(n: i32) -> Vec<i32> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as i32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn fault(expected: &str, got: &Value) -> RuntimeError {
    RuntimeError::TypeFault(alloc::format!("expected {expected}, got {got}"))
}

fn arg(args: &[Value], i: usize) -> Result<&Value, RuntimeError> {
    match args.get(i) {
        Some(Value::Null) => Err(RuntimeError::NullDereference(alloc::format!("argument {i}"))),
        Some(v) => Ok(v),
        None => Err(RuntimeError::TypeFault(alloc::format!("missing argument {i}"))),
    }
}

fn int(v: &Value) -> Result<i32, RuntimeError> {
    match v {
        Value::Int(i) => Ok(*i),
        other => Err(fault("int", other)),
    }
}

fn ints<const N: usize>(args: &[Value]) -> Result<[i32; N], RuntimeError> {
    let mut out = [0; N];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = int(arg(args, i)?)?;
    }
    Ok(out)
}

fn int_items(v: &Value) -> Result<Vec<i32>, RuntimeError> {
    v.items().ok_or_else(|| fault("int sequence", v))?.iter().map(int).collect()
}

fn double_items(v: &Value) -> Result<Vec<f64>, RuntimeError> {
    let items = v.items().ok_or_else(|| fault("double sequence", v))?;
    items
        .iter()
        .map(|x| match x {
            Value::Double(d) => Ok(*d),
            other => Err(fault("double", other)),
        })
        .collect()
}

fn matrix(v: &Value) -> Result<Vec<Vec<i32>>, RuntimeError> {
    let rows = v.items().ok_or_else(|| fault("int matrix", v))?;
    rows.iter()
        .map(|row| match row {
            Value::Null => Err(RuntimeError::NullDereference("matrix row".into())),
            row => int_items(row),
        })
        .collect()
}

fn int_array(xs: Vec<i32>) -> Value {
    Value::Array { elem: Type::int(), items: xs.into_iter().map(Value::Int).collect() }
}

fn int_list(category: Category, xs: Vec<i32>) -> Value {
    Value::Coll { category, elem: Type::int(), items: xs.into_iter().map(Value::Int).collect() }
}

fn matrix_value(m: Vec<Vec<i32>>) -> Value {
    Value::Array { elem: Type::array_of(Type::Prim(Prim::Int)), items: m.into_iter().map(int_array).collect() }
}

fn points(ps: Vec<(i32, i32)>) -> Value {
    let items = ps.into_iter().map(|(x, y)| Value::obj("Point", [("x", Value::Int(x)), ("y", Value::Int(y))])).collect();
    Value::Array { elem: Type::class("Point"), items }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(key: &str, args: Vec<Value>) -> Value {
        let mut args = args;
        standard_registry().call(key, &mut args).unwrap().unwrap()
    }

    #[test]
    fn bresenham_reference_lines() {
        assert_eq!(bresenham(0, 0, 5, 3), vec![(0, 0), (1, 1), (2, 1), (3, 2), (4, 2), (5, 3)]);
        assert_eq!(bresenham(0, 0, 0, 0), vec![(0, 0)]);
        assert_eq!(bresenham(0, 0, 3, 5), vec![(0, 0), (1, 1), (1, 2), (2, 3), (2, 4), (3, 5)]);
        // Reversal visits the same number of cells.
        assert_eq!(bresenham(5, 3, 0, 0).len(), 6);
    }

    #[test]
    fn counting_sort_both_directions() {
        let xs = int_array(vec![3, 1, 2]);
        assert_eq!(call("counting_sort", vec![xs.clone(), Value::Bool(false)]), int_array(vec![1, 2, 3]));
        assert_eq!(call("counting_sort", vec![xs, Value::Bool(true)]), int_array(vec![3, 2, 1]));
    }

    #[test]
    fn matrix_builtins() {
        let a = matrix_value(vec![vec![1, 2], vec![3, 4]]);
        let b = matrix_value(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(call("matrix_multiply", vec![a.clone(), b.clone()]), matrix_value(vec![vec![2, 1], vec![4, 3]]));
        assert_eq!(call("matrix_multiply", vec![b, a.clone()]), matrix_value(vec![vec![3, 4], vec![1, 2]]));
        assert_eq!(call("matrix_transpose", vec![a]), matrix_value(vec![vec![1, 3], vec![2, 4]]));
        let mut bad = vec![matrix_value(vec![vec![1, 2]]), matrix_value(vec![vec![1, 2]])];
        assert!(standard_registry().call("matrix_multiply", &mut bad).is_err());
    }

    #[test]
    fn sequences_and_numbers() {
        assert_eq!(lcs(&[1, 3, 4, 1, 2], &[3, 4, 1, 2, 1]), vec![3, 4, 1, 2]);
        assert_eq!(sieve(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(call("count_primes", vec![Value::Int(10)]), Value::Int(4));
        let ds = Value::Coll {
            category: Category::List,
            elem: Type::Prim(Prim::Double),
            items: [1.0, 2.0, 9.0].into_iter().map(Value::Double).collect(),
        };
        assert_eq!(call("mean", vec![ds.clone()]), Value::Double(4.0));
        assert_eq!(call("median", vec![ds]), Value::Double(2.0));
        let anagram = call("is_anagram", vec![Value::Str("Listen".into()), Value::Str("silent".into())]);
        assert_eq!(anagram, Value::Bool(true));
        assert_eq!(midpoint_circle(0, 0, 1), vec![(1, 0), (0, 1), (-1, 0), (0, -1)]);
    }
}
