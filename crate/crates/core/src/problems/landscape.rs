//! Single-objective landscape functions used as distance functions of the
//! LSMOP problems. Each has its global minimum value 0; all but Rosenbrock
//! attain it at the origin.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Landscape {
    Sphere,
    Schwefel,
    Rosenbrock,
    Rastrigin,
    Griewank,
    Ackley,
}

impl Landscape {
    pub fn eval<T: Scalar>(self, z: &[T]) -> T {
        match self {
            Landscape::Sphere => sphere(z),
            Landscape::Schwefel => schwefel(z),
            Landscape::Rosenbrock => rosenbrock(z),
            Landscape::Rastrigin => rastrigin(z),
            Landscape::Griewank => griewank(z),
            Landscape::Ackley => ackley(z),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Landscape::Sphere => "sphere",
            Landscape::Schwefel => "schwefel",
            Landscape::Rosenbrock => "rosenbrock",
            Landscape::Rastrigin => "rastrigin",
            Landscape::Griewank => "griewank",
            Landscape::Ackley => "ackley",
        }
    }
}

pub fn sphere<T: Scalar>(z: &[T]) -> T {
    z.iter().fold(T::zero(), |acc, &x| acc + x * x)
}

/// Schwefel 2.21: the largest absolute component.
pub fn schwefel<T: Scalar>(z: &[T]) -> T {
    z.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
}

pub fn rosenbrock<T: Scalar>(z: &[T]) -> T {
    let hundred = T::of(100.0);
    z.windows(2).fold(T::zero(), |acc, w| {
        let a = w[0] * w[0] - w[1];
        let b = w[0] - T::one();
        acc + hundred * a * a + b * b
    })
}

pub fn rastrigin<T: Scalar>(z: &[T]) -> T {
    let ten = T::of(10.0);
    let two_pi = T::of(2.0) * T::PI();
    z.iter()
        .fold(T::zero(), |acc, &x| acc + x * x - ten * (two_pi * x).cos() + ten)
        .max(T::zero())
}

pub fn griewank<T: Scalar>(z: &[T]) -> T {
    let mut sum = T::zero();
    let mut prod = T::one();
    for (i, &x) in z.iter().enumerate() {
        sum = sum + x * x;
        prod = prod * (x / T::of_usize(i + 1).sqrt()).cos();
    }
    (sum / T::of(4000.0) - prod + T::one()).max(T::zero())
}

pub fn ackley<T: Scalar>(z: &[T]) -> T {
    if z.is_empty() {
        return T::zero();
    }
    let n = T::of_usize(z.len());
    let two_pi = T::of(2.0) * T::PI();
    let (sq, cs) = z.iter().fold((T::zero(), T::zero()), |(sq, cs), &x| {
        (sq + x * x, cs + (two_pi * x).cos())
    });
    let twenty = T::of(20.0);
    let a = twenty * (T::one() - (T::of(-0.2) * (sq / n).sqrt()).exp());
    let b = T::E() - (cs / n).exp();
    (a + b).max(T::zero())
}
