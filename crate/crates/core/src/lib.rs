pub mod calculus;
pub mod checker;
pub mod cli;
pub mod corpus;
pub mod parser;
pub mod search;
pub mod syntax;
pub mod transform;
