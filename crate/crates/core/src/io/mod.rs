//! Configuration, CSV/JSON artifacts and the task runner behind the CLI.

pub mod config;
pub mod describe;
pub mod run;
pub mod tables;

pub use config::{ExperimentConfig, SiteRef, Task, TaskOptions};
pub use describe::describe;
pub use run::{run, Manifest, RunError, RunOptions};

pub mod complex_pair {
    //! Serde adapter for complex numbers written as `[re, im]`.
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::C64;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}
