//! Triangle presentations over the Singer model of PG(2,q) and the finitely
//! presented abelian group `A_T` they define.

pub mod gf;
pub mod plane;
pub mod zlinalg;
pub mod presentation;
pub mod coinv;
