package inv;

public class Clerk {
    private final Inventory inventory;
    private final Registry registry = new Registry();
    private final String name;

    public Clerk(Inventory inventory, String name) {
        this.inventory = inventory;
        this.name = name;
    }

    public void receive(String itemName, int amount, double price) {
        inventory.add(new Item(itemName, amount, price));
        inventory.restock(itemName, amount);
        registry.bind(Clerk.class, this);
    }

    public void ship(Shelf shelf, int index) {
        Item item = shelf.take(index);
        shelf.moveTo(inventory, index);
        Report report = new Report(inventory);
        report.item(item);
        report.summary(item.getName());
        report.line(name);
    }

    public boolean check(Object thing) {
        Item item = (Item) thing;
        return registry.isBound(Item.class) && inventory.contains(item.getName());
    }

    public void greet(Clerk other) {
        Report r = new Report(inventory);
        r.line(other.name);
        r.line("hello");
        r.line(null);
        registry.rename(this.name);
        registry.bind(String.class, other);
    }

    public void note(Object thing) {
        Report r = new Report(inventory);
        r.line((String) thing);
        r.item((Item) thing);
    }

    public void audit(int amount) {
        inventory.restock(name, amount + 1);
        Auditor.check(name);
    }
}
