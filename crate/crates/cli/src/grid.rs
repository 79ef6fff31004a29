//! Grid specifications for sweep commands: comma-separated items, each either a
//! value `n`, an inclusive range `a..b`, or a stepped range `a..b:step`.

pub fn parse_grid(spec: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_once("..") {
            None => out.push(parse_value(item)?),
            Some((start, rest)) => {
                let (end, step) = match rest.split_once(':') {
                    Some((end, step)) => (end, parse_value(step)?),
                    None => (rest, 1),
                };
                if step == 0 {
                    return Err(format!("zero step in grid item {item:?}"));
                }
                let (start, end) = (parse_value(start)?, parse_value(end)?);
                out.extend((start..=end).step_by(step));
            }
        }
    }
    Ok(out)
}

fn parse_value(text: &str) -> Result<usize, String> {
    text.trim()
        .parse()
        .map_err(|_| format!("invalid grid value {text:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_grid("3").unwrap(), vec![3]);
        assert_eq!(parse_grid("2,3,4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_grid("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_grid("4..64:4").unwrap().len(), 16);
        assert_eq!(parse_grid("1..2, 7").unwrap(), vec![1, 2, 7]);
        assert!(parse_grid("").unwrap().is_empty());
        assert!(parse_grid("a").is_err());
        assert!(parse_grid("1..4:0").is_err());
    }
}
